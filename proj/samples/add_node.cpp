// Loads an edge list, attaches a new node to the given neighbours and prints
// the Perron value before and after together with the perturbation bounds.
//
//   add_node samples/house_with_roof.txt a c e

#include <iomanip>
#include <iostream>
#include <vector>

#include "nbspec/nbspec.hpp"

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: add_node EDGE_LIST NEIGHBOUR...\n";
        return 2;
    }
    try {
        const nbspec::Graph g = nbspec::load_edge_list_file(argv[1]);
        std::vector<nbspec::NodeId> nbrs;
        for (int i = 2; i < argc; ++i) {
            const auto id = g.find(argv[i]);
            if (!id) throw nbspec::DomainError(std::string("unknown node ") + argv[i]);
            nbrs.push_back(*id);
        }

        const auto a = nbspec::analyze_addition(g, nbrs);
        std::cout << std::setprecision(12) << "lambda1    " << a.lambda1 << '\n'
                  << "lambda_c   " << a.lambda_c << "  (direct " << a.direct_lambda_c << ")\n"
                  << "epsilon_c  " << a.epsilon_c << '\n'
                  << "1^T X 1    " << a.x_degree << '\n';
        if (a.eps_approx) std::cout << "alpha11/l1^2 " << *a.eps_approx << '\n';
        for (const auto& b : a.bounds)
            std::cout << "bound p=" << nbspec::to_string(b.p) << "  ||LXR|| " << b.lxr_norm << "  bound " << b.theorem2_bound
                      << (b.bound_holds() ? "  holds" : "  VIOLATED") << '\n';
        for (const auto& n : a.notes) std::cout << "note: " << n << '\n';
    } catch (const nbspec::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
