// Fits x^4 on knots -1, 0, 1 for a few q values and prints the pieces.

#include <cstdio>

#include "qspline/qspline.hpp"

int main() {
    using namespace qspline;
    const Polynomial target = Polynomial::monomial(4);

    for (double qv : {0.5, 1.0, 2.0}) {
        const QParam q(qv);
        const auto model = fit(sample_polynomial(target, {-1.0, 0.0, 1.0}, q), q);
        std::printf("q = %g, moments = (%g, %g, %g)\n", qv, model.moments().mu[0], model.moments().mu[1],
                    model.moments().mu[2]);
        for (const auto& piece : model.pieces()) {
            std::printf("  [%g, %g]: %+.6f %+.6f x %+.6f x^2 %+.6f x^3\n", piece.x_lo, piece.x_hi, piece.poly.coeff(0),
                        piece.poly.coeff(1), piece.poly.coeff(2), piece.poly.coeff(3));
        }
        std::printf("  S(0.5) = %.6f, f(0.5) = %.6f\n", evaluate(model, 0.5), target(0.5));
    }
}
