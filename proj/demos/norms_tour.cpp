// Norms of a few model functions in Q_p^beta at (p, beta) = (0.6, 0.8),
// each printed with the arc or point where the supremum is attained.

#include <cstdio>

#include "qdisc/qdisc.hpp"

using namespace qdisc;

namespace {

void show(const char* label, const NormResult& r) {
    if (r.witness.kind == Witness::Kind::arc)
        std::printf("  %-34s %.6f  at arc(center %.4f, |I| %.6g)  delta %.2e\n", label, r.value, r.witness.arc.center,
                    r.witness.arc.norm_length(), r.refinement_delta);
    else
        std::printf("  %-34s %.6f  at point(%.4f, %.4f)  delta %.2e\n", label, r.value, r.witness.point.real(),
                    r.witness.point.imag(), r.refinement_delta);
}

} // namespace

int main() {
    const SpaceParams params{0.6, 0.8};
    const QuadConfig cfg;
    std::printf("Disc seminorms, box form vs Moebius form\n");
    const TaylorSeries z{0.0, 1.0};
    show("z, box", q_disc_box_seminorm(z, params, cfg));
    show("z, Moebius", q_disc_mobius_seminorm(z, params, cfg));
    const TaylorSeries lac = lacunary_series(2.0, 5, 512);
    show("lacunary K=5, box", q_disc_box_seminorm(lac, params, cfg));
    show("lacunary K=5, Moebius", q_disc_mobius_seminorm(lac, params, cfg));

    std::printf("\nTest functions f_b stay bounded as |b| -> 1\n");
    for (double r : {0.0, 0.5, 0.9, 0.99}) {
        char label[64];
        std::snprintf(label, sizeof label, "||f_b||, b = %.2f", r);
        show(label, q_disc_mobius_norm(FbFunction(cd{r, 0.0}, params.beta), params, cfg));
    }

    std::printf("\nBoundary quantities for e^{i theta} + 0.25 e^{4 i theta}\n");
    FourierSeries F(4);
    F.set(1, 1.0);
    F.set(4, 0.25);
    show("Q circle seminorm", q_circle_seminorm(F, params, cfg));
    show("difference form", q_circle_difference_form(F, params, cfg));
    show("BMO^beta seminorm", bmo_beta_seminorm(F, params.beta, cfg));

    std::printf("\nGrowth and Morrey quantities for the lacunary function\n");
    show("growth sup (1-|z|^2)^{2b-1}|f'|", growth_seminorm(lac, params.beta, cfg));
    show("Morrey norm, lambda = 0.9", morrey_norm(lac, 0.9, cfg));
    return 0;
}
