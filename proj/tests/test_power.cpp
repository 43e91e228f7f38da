#include <sstream>

#include "doctest.h"
#include "lumen/power.hpp"

using namespace lumen;

namespace {

PowerParams milliwatt_params() {
    PowerParams pp;
    pp.p_multiplier_mrr = 1e-3;
    pp.p_multiplier_mzi = 1e-3;
    pp.p_summation = 0.1e-3;
    pp.p_eom = 0.5e-3;
    pp.p_laser_per_input = 0.0;
    return pp;
}

// one-line oracle for the report total
double total_oracle(const DeviceCensus& c, Backend b, const PowerParams& pp, std::size_t n_in) {
    return c.n_multipliers * pp.multiplier_power(b) + c.n_summation_units * pp.p_summation +
           c.n_eoms * pp.p_eom + n_in * pp.p_laser_per_input + c.n_waveguides * pp.p_waveguide;
}

}  // namespace

TEST_CASE("zero parameters give zero power") {
    const DeviceCensus c = census_from_shape(zoo_lookup("mlp3"), Backend::kMrr);
    const PowerReport r = estimate_power(c, Backend::kMrr, PowerParams{}, 784);
    CHECK(r.p_total_w == 0.0);
}

TEST_CASE("hand-count oracle for the 2-2-2 MLP") {
    const NetworkSpec spec = make_mlp("mlp222", 2, {2}, 2);
    const PowerReport r = power_report(spec, Backend::kMrr, milliwatt_params());
    CHECK(r.census.n_multipliers == 8);
    CHECK(r.census.n_summation_units == 4);
    CHECK(r.census.n_eoms == 2);
    CHECK(r.p_total_w == doctest::Approx(9.4e-3).epsilon(1e-12));
}

TEST_CASE("power is linear in every parameter and ignores weight values") {
    const DeviceCensus c = census_from_shape(zoo_lookup("cnn3"), Backend::kMzi);
    PowerParams pp = milliwatt_params();
    const double base = estimate_power(c, Backend::kMzi, pp, 9).p_total_w;

    PowerParams doubled = pp;
    doubled.p_multiplier_mzi *= 2.0;
    const double bumped = estimate_power(c, Backend::kMzi, doubled, 9).p_total_w;
    CHECK(bumped - base ==
          doctest::Approx(c.n_multipliers * pp.p_multiplier_mzi).epsilon(1e-12));

    // homogeneity: scaling all params scales the total
    PowerParams tripled = pp;
    tripled.p_multiplier_mzi *= 3.0;
    tripled.p_summation *= 3.0;
    tripled.p_eom *= 3.0;
    tripled.p_laser_per_input *= 3.0;
    tripled.p_waveguide *= 3.0;
    CHECK(estimate_power(c, Backend::kMzi, tripled, 9).p_total_w ==
          doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("report totals match the independent recomputation") {
    const PowerParams pp = milliwatt_params();
    for (const char* name : {"mlp3", "mlp5", "mlp9", "cnn3"}) {
        for (Backend b : {Backend::kMrr, Backend::kMzi}) {
            const NetworkSpec spec = zoo_lookup(name);
            const PowerReport r = power_report(spec, b, pp);
            const double want = total_oracle(r.census, b, pp, encoded_input_channels(spec));
            CHECK(r.p_total_w == doctest::Approx(want).epsilon(1e-12));

            double breakdown_sum = 0.0;
            for (const PowerBreakdownRow& row : r.breakdown) breakdown_sum += row.power_w;
            CHECK(breakdown_sum == doctest::Approx(r.p_total_w).epsilon(1e-9));
        }
    }
}

TEST_CASE("depth sweep is monotone and the backend gap grows with multipliers") {
    PowerParams pp = milliwatt_params();
    pp.p_multiplier_mzi = 0.8e-3;  // 2 * p_mzi > p_mrr, so the gap widens
    const std::vector<NetworkSpec> specs = {zoo_lookup("mlp3"), zoo_lookup("mlp5"),
                                            zoo_lookup("mlp9")};
    const std::vector<PowerReport> table =
        power_sweep(specs, {Backend::kMrr, Backend::kMzi}, pp);
    REQUIRE(table.size() == 6);

    CHECK(table[0].p_total_w < table[2].p_total_w);  // mlp3 < mlp5 (mrr)
    CHECK(table[2].p_total_w < table[4].p_total_w);  // mlp5 < mlp9 (mrr)

    const double gap3 = table[1].p_total_w - table[0].p_total_w;
    const double gap5 = table[3].p_total_w - table[2].p_total_w;
    const double gap9 = table[5].p_total_w - table[4].p_total_w;
    CHECK(gap3 < gap5);
    CHECK(gap5 < gap9);
}

TEST_CASE("empty sweep yields an empty table and a bare csv header") {
    const std::vector<PowerReport> table = power_sweep({}, {Backend::kMrr}, PowerParams{});
    CHECK(table.empty());
    std::ostringstream os;
    write_power_csv(os, table);
    CHECK(os.str() ==
          "network,backend,n_multipliers,n_summation,n_eom,"
          "p_total_mW,p_mult_mW,p_sum_mW,p_eom_mW,p_laser_mW\n");
}

TEST_CASE("csv rows carry milliwatt values in fixed column order") {
    const NetworkSpec spec = make_mlp("mlp222", 2, {2}, 2);
    std::ostringstream os;
    write_power_csv(os, {power_report(spec, Backend::kMrr, milliwatt_params())});
    const std::string text = os.str();
    CHECK(text.find("mlp222,mrr,8,4,2,9.4,8,0.4,1,0\n") != std::string::npos);
}

TEST_CASE("census-only inventories flow through power reports") {
    PowerParams pp;
    pp.p_multiplier_mrr = 1e-6;
    pp.p_multiplier_mzi = 1e-6;
    const PowerReport r = power_report(zoo_lookup("vgg16"), Backend::kMrr, pp);
    CHECK(r.census.n_multipliers == 138344128);
    CHECK(r.p_total_w == doctest::Approx(138344128 * 1e-6).epsilon(1e-12));
    CHECK(r.breakdown.size() == zoo_lookup("vgg16").layers.size() + 1);  // + laser row
}
