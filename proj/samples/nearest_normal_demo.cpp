#include <iostream>

#include "structnorm/structnorm.hpp"

using namespace structnorm;

int main() {
    const HalfDimension half(4);
    for (Structure tag : {Structure::hamiltonian, Structure::skew_hamiltonian, Structure::per_hermitian,
                          Structure::perskew_hermitian}) {
        const ComplexMatrix a = gen_structured(tag, half, 7);
        const auto result = solve(a, tag);

        std::cout << to_string(tag) << ": sweeps=" << result.sweeps << " converged=" << result.converged
                  << " ||A||=" << frob_norm(a) << " ||A-X||=" << result.distance
                  << " structure(X)=" << check_structure(result.x, tag)
                  << " normality(X)=" << normality_residual(result.x) << '\n';
    }

    // A structured normal input is its own nearest structured normal matrix.
    const auto fixture = gen_normal_structured(Structure::hamiltonian, half, 11, 64);
    const auto result = solve(fixture.a, Structure::hamiltonian);
    std::cout << "normal hamiltonian: ||A-X||/||A|| = " << result.distance / frob_norm(fixture.a) << '\n';
}
