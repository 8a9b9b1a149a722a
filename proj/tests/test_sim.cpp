#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "reachquant/errors.hpp"
#include "reachquant/sim.hpp"
#include "test_support.hpp"

using namespace reachquant;

namespace {

SimTrace short_run(SchemeKind scheme = SchemeKind::SetBased, std::uint64_t seed = 1,
                   double horizon = 2.0) {
  return run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                         QuantizerConfig::from_levels(4, 2), scheme, refsys::signals(),
                         refsys::options(horizon, seed));
}

}  // namespace

TEST_CASE("signal evaluation") {
  SignalSpec s;
  CHECK(s.input_at(1.0, 2) == Vec{0.0, 0.0});

  s.input = SignalSpec::Input::Sinusoid;
  s.amplitude = 0.5;
  s.angular_freq = 2.0;
  s.phase = 0.25;
  CHECK(s.input_at(1.0, 1)[0] == doctest::Approx(0.5 * std::sin(2.25)).epsilon(1e-15));

  s.input = SignalSpec::Input::Table;
  s.input_table = {{0.0, {1.0}}, {1.0, {-1.0}}, {2.5, {0.5}}};
  CHECK(s.input_at(0.0, 1)[0] == 1.0);
  CHECK(s.input_at(0.99, 1)[0] == 1.0);
  CHECK(s.input_at(1.0, 1)[0] == -1.0);
  CHECK(s.input_at(3.0, 1)[0] == 0.5);

  // Before the first row the table reads zero.
  s.input_table = {{1.0, {-1.0}}};
  CHECK(s.input_at(0.5, 1)[0] == 0.0);

  s.dist_table = {{0.0, {0.02}}, {0.5, {-0.02}}};
  CHECK(s.dist_table_at(0.6, 1)[0] == -0.02);
  CHECK_THROWS_AS(s.dist_table_at(0.6, 2), std::invalid_argument);  // row size mismatch
}

TEST_CASE("trace shape and transmission schedule") {
  const SimTrace tr = short_run();
  CHECK(tr.sample_count() == 2001);
  CHECK(tr.transmissions.size() == 21);  // k = 0 agreed, 1..20 encoded
  CHECK(tr.encoded_count() == 20);
  CHECK_FALSE(tr.transmissions[0].encoded);
  CHECK(tr.transmissions[0].pd.value == refsys::bounds().x_c);
  CHECK(tr.transmissions[1].encoded);
  CHECK(tr.transmissions[20].t == doctest::Approx(2.0));
  CHECK(tr.is_transmission.front() == 1);
  CHECK(tr.is_transmission.back() == 1);  // horizon is a multiple of T
  CHECK(tr.region_k.back() == 20);
  CHECK(tr.n == 2);
  CHECK(tr.rng == "splitmix64");

  // The initial region is the agreed box around x_c.
  CHECK(tr.transmissions[0].region_center == refsys::bounds().x_c);
  CHECK(tr.transmissions[0].region_halfwidth == Vec{1.0, 1.0});
  CHECK(tr.transmissions[0].eq_bar == Vec{0.25, 0.25});
}

TEST_CASE("perfect initial knowledge keeps the estimator error at zero") {
  SignalSpec s = refsys::signals();
  s.disturbance = SignalSpec::Disturbance::Zero;
  SimOptions o = refsys::options(2.0);
  o.x0 = {10.0, -5.0};  // start exactly at the estimator's initialization
  const SimTrace tr = run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                      QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                      s, o);
  for (double e : tr.ehat_norm) CHECK(e < 1e-12);
}

TEST_CASE("logged envelopes hold at every sample") {
  for (SchemeKind scheme : {SchemeKind::SetBased, SchemeKind::NormBased}) {
    const SimTrace tr = short_run(scheme, 3);
    for (std::size_t i = 0; i < tr.sample_count(); ++i) {
      CHECK(tr.ehat_norm[i] <= tr.est_bound[i] + 1e-9);
      CHECK(tr.er_norm[i] <= tr.rec_bound[i] + 1e-9);
      if (tr.is_transmission[i] && tr.region_k[i] >= 1)
        for (std::size_t a = 0; a < tr.n; ++a)
          CHECK(std::abs(tr.eq[i][a]) <= tr.eq_bar[i][a] + 1e-12);
    }
  }
}

TEST_CASE("region recursion in the trace matches the scheme law") {
  const SimTrace tr = short_run(SchemeKind::SetBased, 2);
  const Mat lambda = mat_exp(refsys::plant().A, 0.1);
  const Mat lambda_bar = entrywise_abs(lambda);
  for (std::size_t j = 0; j + 1 < tr.transmissions.size(); ++j) {
    const Transmission& cur = tr.transmissions[j];
    const Transmission& nxt = tr.transmissions[j + 1];
    const QuantizerState state{cur.region_center, cur.region_halfwidth, cur.k};
    const QuantizerState want =
        set_based_update(state, cur.pd, lambda, lambda_bar, cur.beta_ue, 4);
    CHECK(nxt.region_center == want.C);
    CHECK(nxt.region_halfwidth == want.L);
  }

  const SimTrace tn = short_run(SchemeKind::NormBased, 2);
  for (std::size_t j = 0; j + 1 < tn.transmissions.size(); ++j) {
    const Transmission& cur = tn.transmissions[j];
    const Transmission& nxt = tn.transmissions[j + 1];
    const QuantizerState want = norm_based_update(
        QuantizerState{cur.region_center, cur.region_halfwidth, cur.k}, cur.pd, lambda, 5.0,
        0.1, cur.beta_ue, 4);
    CHECK(nxt.region_halfwidth == want.L);
  }
}

TEST_CASE("decoded packets decode against the logged region") {
  const SimTrace tr = short_run(SchemeKind::SetBased, 4);
  for (const Transmission& tx : tr.transmissions) {
    if (!tx.encoded) continue;
    const QuantizerState state{tx.region_center, tx.region_halfwidth, tx.k};
    const DecodedPacket pd = decode(tx.pe, state, 4);
    CHECK(pd.value == tx.pd.value);
  }
}

TEST_CASE("trace is deterministic and seed sensitive") {
  const SimTrace a = short_run(SchemeKind::SetBased, 5);
  const SimTrace b = short_run(SchemeKind::SetBased, 5);
  CHECK(a.csv() == b.csv());

  std::ostringstream pa, pb;
  a.write_packets(pa);
  b.write_packets(pb);
  CHECK(pa.str() == pb.str());
  CHECK(pa.str().size() == a.encoded_count() * (4 + 2 * a.n));

  const SimTrace c = short_run(SchemeKind::SetBased, 6);
  CHECK(a.csv() != c.csv());
}

TEST_CASE("csv layout") {
  const SimTrace tr = short_run();
  const std::string text = tr.csv();
  CHECK(text.rfind("# scheme=set\n", 0) == 0);
  CHECK(text.find("# seed=1\n") != std::string::npos);
  CHECK(text.find("# rng=splitmix64\n") != std::string::npos);
  CHECK(text.find("# growth=integral\n") != std::string::npos);
  CHECK(text.find("# decoder=full\n") != std::string::npos);
  CHECK(text.find("t,x_1,x_2,xhat_1,xhat_2,xr_1,xr_2,C_1,C_2,L_1,L_2,eq_1,eq_2,"
                  "eqbar_1,eqbar_2,ehat_norm,er_norm,est_bound,rec_bound,"
                  "is_transmission,k,pe_1,pe_2\n") != std::string::npos);
  // First data row: initialization event, nothing encoded yet.
  CHECK(text.find("\n0,10.5,-5.5,10,-5,10,-5,10,-5,1,1,0,0,0.25,0.25,") != std::string::npos);
  CHECK(text.find(",1,0,-1,-1\n") != std::string::npos);

  // One line per header entry, column header, and sample.
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 12 + 1 + tr.sample_count());
}

TEST_CASE("steady state metrics") {
  const SimTrace tr = short_run(SchemeKind::SetBased, 1, 4.0);
  const SteadyState ss = steady_state_metrics(tr);
  CHECK(ss.eq_inf > 0.0);
  CHECK(ss.er_inf > 0.0);
  // Tail over everything can only grow the maxima.
  const SteadyState all = steady_state_metrics(tr, 1.0);
  CHECK(all.eq_inf >= ss.eq_inf);
  CHECK(all.er_inf >= ss.er_inf);

  CHECK_THROWS_AS(steady_state_metrics(tr, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(steady_state_metrics(tr, 1.5), std::invalid_argument);
  // 0.7 s of horizon gives 7 encoded transmissions: below the minimum.
  const SimTrace tiny = short_run(SchemeKind::SetBased, 1, 0.7);
  CHECK_THROWS_AS(steady_state_metrics(tiny), std::invalid_argument);
}

TEST_CASE("run validation gates") {
  SimOptions bad_x0 = refsys::options(1.0);
  bad_x0.x0 = {12.0, -5.0};  // outside the initial box
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  refsys::signals(), bad_x0),
                  std::invalid_argument);

  SimOptions off_grid = refsys::options(1.0);
  off_grid.T = 0.1003;
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  refsys::signals(), off_grid),
                  std::invalid_argument);

  ObserverCertificate broken = refsys::certificate();
  broken.nu1 *= 100.0;
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), broken,
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  refsys::signals(), refsys::options(1.0)),
                  CertificateError);

  SimOptions long_gap = refsys::options(4.0);
  long_gap.T = 1.0;
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::NormBased,
                                  refsys::signals(), long_gap),
                  InfeasibleError);
  // The contraction test tolerates the same gap.
  CHECK_NOTHROW(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                refsys::signals(), long_gap));

  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 3), SchemeKind::SetBased,
                                  refsys::signals(), refsys::options(1.0)),
                  std::invalid_argument);
}

TEST_CASE("signal bound violations stop the run") {
  SignalSpec loud = refsys::signals();
  loud.amplitude = 2.0;  // |B u| exceeds u_b = 0.5
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  loud, refsys::options(1.0)),
                  std::runtime_error);

  SignalSpec gusty = refsys::signals();
  gusty.disturbance = SignalSpec::Disturbance::Table;
  gusty.dist_table = {{0.0, {0.2}}};  // beyond d_b = 0.05
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  gusty, refsys::options(1.0)),
                  std::runtime_error);
}

TEST_CASE("half range decoder is plumbed through") {
  SimOptions o = refsys::options(2.0);
  o.decoder = DecoderRange::Half;
  // The half-range decoder may legitimately overflow later; within this
  // short transient-dominated window it must at least produce a different
  // trajectory than the exact inverse.
  try {
    const SimTrace half = run_closed_loop(refsys::plant(), refsys::bounds(),
                                          refsys::certificate(), QuantizerConfig::from_levels(4, 2),
                                          SchemeKind::SetBased, refsys::signals(), o);
    CHECK(half.csv() != short_run().csv());
    CHECK(half.csv().find("# decoder=half\n") != std::string::npos);
  } catch (const QuantizerOverflow&) {
    // Acceptable: the mismatched decode geometry can push the estimate
    // outside the shrinking region.
  }
}

TEST_CASE("disturbance hold redraws on the configured boundary") {
  SignalSpec s = refsys::signals();
  s.dist_hold = 0.5;
  const SimTrace held = run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                        QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                        s, refsys::options(2.0));
  const SimTrace fresh = short_run();
  CHECK(held.csv() != fresh.csv());

  SignalSpec off_grid = s;
  off_grid.dist_hold = 0.00037;
  CHECK_THROWS_AS(run_closed_loop(refsys::plant(), refsys::bounds(), refsys::certificate(),
                                  QuantizerConfig::from_levels(4, 2), SchemeKind::SetBased,
                                  off_grid, refsys::options(2.0)),
                  std::invalid_argument);
}
