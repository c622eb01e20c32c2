// Library walkthrough: a Fock-state witness, a squeezed variance and the
// resonance-fluorescence g2 curve.

#include <cstdio>

#include "ncorr/ncorr.hpp"

int main() {
    using namespace ncorr;

    const StateProvider fock(make_fock(1, ModeCutoff(8)));
    const auto w = build_witness_matrix(fock, OperatorBasis({MultiIndex{{0, 0}}, MultiIndex{{1, 1}}}));
    const auto rep = principal_minors(w, 2);
    std::printf("fock |1>: det = %.6f, %s\n", rep.minors.back().determinant, rep.label().c_str());

    const StateProvider sq(make_squeezed(0.5, 0.0, ModeCutoff(32)));
    const double theta = optimal_quadrature_phase(sq, 0, true);
    std::printf("squeezed r=0.5: <:(dE)^2:> = %.12f at theta = %.4f\n",
                normally_ordered_field_variance(sq, 0, theta), theta);

    const AtomParams atom{6.0, 0.0, 1.0};
    std::printf("atom rabi=6: tau  g2\n");
    for (double tau = 0.0; tau <= 3.0; tau += 0.25) std::printf("  %5.2f  %.6f\n", tau, g2(atom, tau).real());

    const auto three = as_provider(atom, {{0.0, 0.0}, {0.4, 0.0}, {0.9, 0.0}});
    const auto r = check_field_intensity_multipoint(three, {0, 1, 2}, 2);
    std::printf("multipoint: lhs = %.6f, rhs = %.3g, %s\n", r.lhs, r.rhs, r.violated ? "nonclassical" : "no violation");
    return 0;
}
