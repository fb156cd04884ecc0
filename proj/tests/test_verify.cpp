#include <gtest/gtest.h>

#include <cmath>

#include "qdisc/io.hpp"
#include "qdisc/verify.hpp"

using namespace qdisc;

namespace {

// Coarse suprema grids: experiments here check plumbing and exact identities.
VerifyOptions small_options() {
    VerifyOptions o;
    o.arcs = ArcGrid{16, 6};
    o.points = PointGrid{6, 16};
    return o;
}

const ReportRow& row(const ComparabilityReport& r, const std::string& group, const std::string& id) {
    for (const auto& x : r.rows)
        if (x.group == group && x.instance_id == id) return x;
    throw std::runtime_error("row not found: " + group + " " + id);
}

std::vector<NamedSeries> scaled(std::vector<NamedSeries> fam, cd c) {
    for (auto& m : fam) m.f = c * m.f;
    return fam;
}

} // namespace

TEST(Report, DegenerateRowsAndSpread) {
    ComparabilityReport r;
    r.add_row("a", "g", 2.0, 1.0, 0.0, 0.0);
    r.add_row("b", "g", 1.0, 2.0, 0.0, 0.0);
    r.add_row("zero", "g", 0.0, 0.0, 0.0, 0.0);
    r.add_row("tiny", "g", 1e-11, 1.0, 0.0, 0.0);
    EXPECT_FALSE(r.rows[0].degenerate);
    EXPECT_TRUE(r.rows[2].degenerate);
    EXPECT_TRUE(r.rows[3].degenerate);
    EXPECT_TRUE(std::isnan(r.rows[2].ratio));
    EXPECT_DOUBLE_EQ(r.spread("g"), 4.0);
    EXPECT_EQ(r.ratios("g").size(), 2u);
    EXPECT_TRUE(r.passed());
    ComparabilityReport empty;
    EXPECT_EQ(empty.spread(), 1.0);
    EXPECT_TRUE(empty.passed());
}

TEST(Report, SpreadAtLeastOneAndChecks) {
    ComparabilityReport r;
    for (int i = 1; i <= 5; ++i) r.add_row(std::to_string(i), "g", i * 0.3, 1.0, 0.0, 0.0);
    EXPECT_GE(r.spread("g"), 1.0);
    r.check_le("spread", r.spread("g"), 2.0);
    EXPECT_FALSE(r.passed());
    r.checks.clear();
    r.check_in("ratio", 0.5, 1e-2, 1e2);
    r.check_ge("lower", 0.5, 0.05);
    EXPECT_TRUE(r.passed());
}

TEST(Report, CsvFormat) {
    ComparabilityReport r;
    EXPECT_EQ(report_csv(r), "instanceId,quantityA,quantityB,ratio,deltaA,deltaB\n");
    r.add_row("b=(0.5,0)", "norm", 0.25, 0.5, 1e-3, 0.0);
    EXPECT_EQ(report_csv(r),
              "instanceId,quantityA,quantityB,ratio,deltaA,deltaB\n\"norm:b=(0.5,0)\",0.25,0.5,0.5,0.001,0\n");
    EXPECT_EQ(csv_field("a\"b,c"), "\"a\"\"b,c\"");
}

TEST(Report, Reproducible) {
    const auto o = small_options();
    const auto a = exp_carleson_equivalence(default_weight_family(), {1.0}, o);
    const auto b = exp_carleson_equivalence(default_weight_family(), {1.0}, o);
    EXPECT_EQ(dump(to_json(a)), dump(to_json(b)));
    EXPECT_EQ(report_csv(a), report_csv(b));
    const auto j = to_json(a);
    EXPECT_EQ(j["experimentId"], "exp_carleson_equivalence");
    EXPECT_EQ(j["paramRecord"]["arcCenters"], "16");
    EXPECT_TRUE(j["rows"].back()["ratio"].is_null());
}

TEST(CarlesonExperiment, Examples) {
    const auto r = exp_carleson_equivalence(default_weight_family(), {0.5, 1.0}, small_options());
    EXPECT_TRUE(r.passed());
    EXPECT_NEAR(row(r, "s=1", "1").ratio, 1.0, 1e-6);
    EXPECT_NEAR(row(r, "s=1", "1").a, 1.0, 1e-6);
    EXPECT_TRUE(row(r, "s=1", "zero").degenerate);
    EXPECT_LE(r.spread("s=1"), 100.0);
    EXPECT_THROW(exp_carleson_equivalence(default_weight_family(), {0.0}, small_options()), std::invalid_argument);
}

TEST(DiscNormExperiment, ClosedFormRows) {
    std::vector<NamedSeries> fam{{"z", TaylorSeries{0.0, 1.0}}, constant_member()};
    const auto r = exp_disc_norm_equivalence(fam, SpaceParams{0.6, 0.8}, small_options());
    // ||z||^2 = int (1-|z|^2)^{0.2} dA = 1/1.2 in both forms.
    EXPECT_NEAR(row(r, "box/mobius", "z").a, 1.0 / 1.2, 1e-6);
    EXPECT_NEAR(row(r, "box/mobius", "z").b, 1.0 / 1.2, 1e-6);
    EXPECT_TRUE(row(r, "box/mobius", "constant").degenerate);
    EXPECT_TRUE(r.passed());
}

TEST(DiscNormExperiment, ScaleInvariance) {
    const auto o = small_options();
    const SpaceParams params{0.6, 0.8};
    auto fam = lacunary_family(2.0, 3, 4);
    fam.push_back({"z", TaylorSeries{0.0, 1.0}});
    const auto base = exp_disc_norm_equivalence(fam, params, o);
    const auto twice = exp_disc_norm_equivalence(scaled(fam, 2.0), params, o);
    const auto rot = exp_disc_norm_equivalence(scaled(fam, cd{0.6, -0.3}), params, o);
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        EXPECT_EQ(base.rows[i].ratio, twice.rows[i].ratio);
        EXPECT_NEAR(base.rows[i].ratio, rot.rows[i].ratio, 1e-12 * base.rows[i].ratio);
    }
}

TEST(BoundaryExperiment, ConstantAndFirstHarmonic) {
    FourierSeries e1(1);
    e1.set(1, 1.0);
    const auto r = exp_boundary_equivalence({constant_boundary_member(), {"e1", e1}}, SpaceParams{0.6, 0.8}, small_options());
    for (const std::string g : {"(1)/(2)", "(1)/(3)", "(2)/(3)"}) EXPECT_TRUE(row(r, g, "constant").degenerate);
    // Condition (3) for e^{i theta}: density 4(1-|z|^2)^{0.2}, s = 1, supremum at the full box: 4/1.2.
    EXPECT_NEAR(row(r, "(1)/(3)", "e1").b, 4.0 / 1.2, 1e-5);
    EXPECT_THROW(exp_boundary_equivalence({{"e1", e1}}, SpaceParams{0.3, 0.8}, small_options()), admissibility_error);
}

TEST(LemmaExperiment, Examples) {
    FourierSeries e1(1);
    e1.set(1, 1.0);
    const auto r = exp_lemma_le_main({constant_boundary_member(), {"e1", e1}}, SpaceParams{0.6, 0.8}, default_arc_pairs(),
                                     small_options());
    for (const auto& x : r.rows) {
        if (x.instance_id.rfind("constant", 0) == 0) {
            EXPECT_EQ(x.a, 0.0);
            EXPECT_TRUE(x.degenerate);
        } else {
            EXPECT_GT(x.a, 0.0);
            EXPECT_GT(x.b, 0.0);
            EXPECT_TRUE(std::isfinite(x.ratio));
        }
    }
    EXPECT_TRUE(r.passed());
    const ArcPair bad{Arc::from_normalized(0.0, 0.1), Arc::from_normalized(0.0, 0.2)};
    EXPECT_THROW(exp_lemma_le_main({{"e1", e1}}, SpaceParams{0.6, 0.8}, {bad}, small_options()), std::invalid_argument);
}

TEST(LemmaExperiment, TailIntegralOracle) {
    // F = e^{i theta}, J centred at 0 of radian length 3L: mean over J is sinc(3L/2);
    // Simpson on the tail as an independent check.
    FourierSeries e1(1);
    e1.set(1, 1.0);
    const Arc J = Arc::from_normalized(0.0, 3.0 / 32.0);
    const cd mean = std::sin(J.length / 2.0) / (J.length / 2.0);
    const double t0 = J.length / 3.0;
    const int n = 20000;
    const double h = (pi - t0) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * (std::abs(std::polar(1.0, t) - mean) + std::abs(std::polar(1.0, -t) - mean)) / (t * t);
    }
    acc *= h / 3.0;
    EXPECT_NEAR(lemma_tail_integral(e1, J, QuadConfig{}), acc, 1e-6 * acc);
}

TEST(TSigmaExperiment, ScalingAndDegenerate) {
    auto o = small_options();
    o.arcs = ArcGrid{1, 4};
    o.cfg.angular_count = 32;
    std::vector<RadialPsi> fam{default_psi_family().front(), default_psi_family().back()};
    const auto r = exp_tsigma_carleson(fam, 1.0, 2.0, SpaceParams{0.6, 0.8}, o);
    EXPECT_TRUE(row(r, "psi/Tpsi", "zero").degenerate);
    const auto& base = r.rows.front();
    const auto& twice = row(r, "scaling", "2*" + base.instance_id);
    EXPECT_EQ(twice.a, 4.0 * base.a);
    EXPECT_NEAR(twice.b, 4.0 * base.b, 1e-14 * twice.b);
    EXPECT_TRUE(r.passed());
    // sigma below max{(3-p-2beta)/2, 2-2beta} = 0.4
    EXPECT_THROW(exp_tsigma_carleson(fam, 0.3, 2.0, SpaceParams{0.6, 0.8}, o), admissibility_error);
}

TEST(FracExperiment, OrderOneCoincides) {
    std::vector<NamedSeries> fam{{"z", TaylorSeries{0.0, 1.0}}, constant_member()};
    const SpaceParams params{0.6, 0.8};
    const auto r = exp_frac_characterization(fam, params, 1.0, small_options());
    EXPECT_EQ(row(r, "box/frac", "z").a, row(r, "box/frac", "z").b);
    EXPECT_EQ(row(r, "box/frac", "z").ratio, 1.0);
    EXPECT_TRUE(row(r, "box/frac", "constant").degenerate);
    // nu must exceed max{(3-p-2beta)/2, 2-2beta} = 0.4
    EXPECT_THROW(exp_frac_characterization(fam, params, 0.35, small_options()), admissibility_error);
}

TEST(MorreyExperiment, Homogeneity) {
    const SpaceParams params{0.5, 0.8};
    auto fam = lacunary_family(2.0, 3, 3);
    fam.push_back(constant_member());
    const auto base = exp_morrey_relation(fam, params, small_options());
    const auto sc = exp_morrey_relation(scaled(fam, cd{0.0, 2.0}), params, small_options());
    EXPECT_TRUE(row(base, "q/morrey", "constant").degenerate);
    const auto& a = base.rows.front();
    const auto& b = sc.rows.front();
    EXPECT_NEAR(b.a, 2.0 * a.a, 1e-13 * b.a);
    EXPECT_NEAR(b.b, 2.0 * a.b, 1e-13 * b.b);
    EXPECT_NEAR(a.ratio, b.ratio, 1e-13 * a.ratio);
    EXPECT_EQ(base.param_record.back().first, "bracket");
    EXPECT_THROW(exp_morrey_relation(fam, SpaceParams{0.6, 0.7}, small_options()), admissibility_error);
}

TEST(ZrExperiment, OriginValueAndPreconditions) {
    const auto r = exp_zr_estimate({cd{0.0, 0.0}, std::polar(0.9, 1.0)}, 0.2, 4.0, 1.4, small_options());
    const auto& origin = r.rows.front();
    EXPECT_NEAR(origin.a, 1.0 / 1.2, 1e-3);
    EXPECT_EQ(origin.b, 1.0);
    EXPECT_NEAR(origin.ratio, 0.8333, 1e-3);
    EXPECT_TRUE(r.passed());
    EXPECT_THROW(exp_zr_estimate({cd{}}, 0.2, 4.0, 0.0, small_options()), std::invalid_argument);
    EXPECT_THROW(exp_zr_estimate({cd{}}, -1.0, 4.0, 0.5, small_options()), std::invalid_argument);
    EXPECT_THROW(exp_zr_estimate({cd{}}, 0.2, 2.1, 1.4, small_options()), std::invalid_argument);
}

TEST(FbExperiment, OriginMatchesZ) {
    const auto o = small_options();
    const SpaceParams params{0.6, 0.8};
    const auto r = exp_fb_bound(params, {cd{0.0, 0.0}, cd{0.5, 0.0}}, o);
    const double z_norm = q_disc_mobius_norm(TaylorSeries{0.0, 1.0}, params, o.cfg, o.points).value;
    EXPECT_NEAR(r.rows.front().a, z_norm, 1e-12);
    EXPECT_NEAR(row(r, "rotation", "rotated b=(0.5,0)").ratio, 1.0, 1e-9);
    EXPECT_TRUE(r.passed());
}

TEST(IgExperiment, ConstantSymbolExact) {
    const auto o = small_options();
    std::vector<OperatorPair> pairs;
    for (const auto& m : lacunary_family(2.0, 3, 4)) pairs.push_back({"g=2 " + m.id, m.f, TaylorSeries::constant(2.0)});
    const auto r = exp_Ig_norm(pairs, TaylorSeries{0.5, 0.5}, {cd{0.5, 0.0}}, SpaceParams{0.6, 0.8}, o);
    for (const auto& x : r.rows)
        if (x.group == "upper") {
            EXPECT_EQ(x.ratio, 1.0);
        }
    EXPECT_TRUE(r.passed());
}

TEST(TgExperiment, Identities) {
    const auto o = small_options();
    std::vector<OperatorPair> pairs{{"f=z g=3", TaylorSeries{0.0, 1.0}, TaylorSeries::constant(3.0)},
                                    {"f=z g=(1+z)/2", TaylorSeries{0.0, 1.0}, TaylorSeries{0.5, 0.5}}};
    const auto r = exp_Tg_norm(pairs, SpaceParams{0.6, 0.8}, o);
    EXPECT_TRUE(row(r, "Tg upper", "f=z g=3").degenerate);
    EXPECT_NEAR(row(r, "Tg 1 / g", "f=z g=(1+z)/2").ratio, 1.0, 1e-12);
    EXPECT_TRUE(r.passed());
    EXPECT_THROW(exp_Tg_norm(pairs, SpaceParams{0.6, 1.0}, o), admissibility_error);
}

TEST(Registry, Ids) {
    EXPECT_EQ(experiment_ids().size(), 11u);
    EXPECT_THROW(run_experiment("exp_unknown", {}), std::invalid_argument);
}
