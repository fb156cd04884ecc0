#pragma once

/**
 * @file params.hpp
 * @brief Space parameters (p, beta, b, nu), derived exponents and the
 *        admissibility matrix for each theorem-level experiment.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qdisc {

/// Hypothesis sets a computation can be checked against.
enum class TheoremContext {
    base,                 ///< p in (0,1], beta in (1/2,1], b > 1, nu > 0
    circleTheorems,       ///< boundary Q-space equivalences
    morreyTheorem,        ///< Q-space / Morrey space relation
    fracCharacterization, ///< fractional-derivative Carleson characterization
    tsigmaLemma,          ///< Carleson preservation under T_sigma
    volterraTheorem       ///< T_g boundedness (needs beta < 1)
};

inline std::string_view to_string(TheoremContext ctx) {
    switch (ctx) {
    case TheoremContext::base: return "base";
    case TheoremContext::circleTheorems: return "circleTheorems";
    case TheoremContext::morreyTheorem: return "morreyTheorem";
    case TheoremContext::fracCharacterization: return "fracCharacterization";
    case TheoremContext::tsigmaLemma: return "tsigmaLemma";
    case TheoremContext::volterraTheorem: return "volterraTheorem";
    }
    return "unknown";
}

/// Result of an admissibility check. `violated` names each failing inequality.
struct Verdict {
    bool pass = true;
    std::vector<std::string> violated;

    explicit operator bool() const { return pass; }

    void require(bool ok, std::string name) {
        if (!ok) {
            pass = false;
            violated.push_back(std::move(name));
        }
    }

    std::string message() const {
        std::string out;
        for (const auto& v : violated) {
            if (!out.empty()) out += "; ";
            out += v;
        }
        return out;
    }
};

struct SpaceParams {
    double p = 0.6;
    double beta = 0.8;
    double b = 2.0;   // fractional-derivative base
    double nu = 1.0;  // derivative order

    // Weight exponent of the Carleson-box density |f'|^2 (1-|z|^2)^{p-2+2beta}.
    double box_weight_exp() const { return p - 2.0 + 2.0 * beta; }
    // Carleson scaling exponent p+2-2beta.
    double box_scale_exp() const { return p + 2.0 - 2.0 * beta; }
    // Diagonal kernel exponent in the boundary double integral.
    double circle_kernel_exp() const { return 4.0 - p - 2.0 * beta; }
    // Arc normalisation exponent of the boundary double integral.
    double circle_scale_exp() const { return 2.0 * beta - 2.0 - p; }
    double morrey_lambda() const { return p - 2.0 * beta + 2.0; }
    double nu_star() const { return (3.0 - p - 2.0 * beta) / 2.0; }
    // Lower bound nu (or sigma) must exceed for the fractional characterization.
    double nu_threshold() const { return std::max((3.0 - p - 2.0 * beta) / 2.0, 2.0 - 2.0 * beta); }
};

/// Admissibility of `params` for the hypotheses of `ctx`.
/// `order` is the derivative order (nu) or operator order (sigma) where relevant;
/// when NaN the stored params.nu is used.
inline Verdict validate(const SpaceParams& params, TheoremContext ctx,
                        double order = std::numeric_limits<double>::quiet_NaN()) {
    Verdict v;
    const double p = params.p;
    const double beta = params.beta;
    v.require(p > 0.0 && p <= 1.0, "0<p≤1");
    v.require(beta > 0.5 && beta <= 1.0, "1/2<β≤1");
    v.require(params.b > 1.0, "b>1");
    v.require(params.nu > 0.0, "ν>0");
    const double ord = std::isnan(order) ? params.nu : order;

    switch (ctx) {
    case TheoremContext::base:
        break;
    case TheoremContext::circleTheorems:
        v.require(p + 2.0 * beta > 2.0, "p+2β>2");
        v.require(p < 1.0, "p<1");
        v.require(beta < 1.0, "β<1");
        break;
    case TheoremContext::morreyTheorem:
        v.require(2.0 * beta - p >= 1.0, "2β−p≥1");
        {
            const double lambda = params.morrey_lambda();
            v.require(lambda > 0.0 && lambda <= 1.0, "0<λ≤1");
        }
        break;
    case TheoremContext::fracCharacterization:
        v.require(p > 2.0 - 2.0 * beta, "p>2−2β");
        v.require(ord > params.nu_threshold(), "ν>max{(3−p−2β)/2,2−2β}");
        break;
    case TheoremContext::tsigmaLemma:
        v.require(p + 2.0 * beta > 2.0, "p+2β>2");
        v.require(ord > params.nu_threshold(), "σ>max{(3−p−2β)/2,2−2β}");
        break;
    case TheoremContext::volterraTheorem:
        v.require(beta < 1.0, "β<1");
        break;
    }
    return v;
}

/// Raised when a computation is requested outside its hypotheses.
class admissibility_error : public std::invalid_argument {
public:
    explicit admissibility_error(const Verdict& v)
        : std::invalid_argument("inadmissible parameters: " + v.message()), verdict_(v) {}
    const Verdict& verdict() const noexcept { return verdict_; }

private:
    Verdict verdict_;
};

inline void require_admissible(const SpaceParams& params, TheoremContext ctx,
                               double order = std::numeric_limits<double>::quiet_NaN()) {
    Verdict v = validate(params, ctx, order);
    if (!v) throw admissibility_error(v);
}

} // namespace qdisc
