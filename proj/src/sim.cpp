#include "reachquant/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "reachquant/errors.hpp"
#include "reachquant/rng.hpp"

namespace reachquant {

namespace {

constexpr double kGridTol = 1e-9;
constexpr double kBoundSlack = 1e-9;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Number of dt steps spanning `span`, which must sit on the sample grid.
std::size_t steps_on_grid(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > kGridTol)
    throw std::invalid_argument(std::string(what) + " must be a positive multiple of dt");
  return steps;
}

Vec table_value(const std::vector<std::pair<double, Vec>>& table, double t, std::size_t dim,
                const char* what) {
  Vec out(dim, 0.0);
  for (const auto& [start, value] : table) {
    if (start > t + kGridTol) break;
    if (value.size() != dim) throw std::invalid_argument(std::string(what) + ": row size mismatch");
    out = value;
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* growth_name(GrowthBound g) {
  return g == GrowthBound::Integral ? "integral" : "exponential";
}

const char* decoder_name(DecoderRange r) { return r == DecoderRange::Full ? "full" : "half"; }

}  // namespace

Vec SignalSpec::input_at(double t, std::size_t m) const {
  switch (input) {
    case Input::Zero:
      return Vec(m, 0.0);
    case Input::Sinusoid:
      return Vec(m, amplitude * std::sin(angular_freq * t + phase));
    case Input::Table:
      return table_value(input_table, t, m, "input table");
  }
  throw std::logic_error("unreachable input kind");
}

Vec SignalSpec::dist_table_at(double t, std::size_t o) const {
  return table_value(dist_table, t, o, "disturbance table");
}

std::size_t SimTrace::encoded_count() const {
  std::size_t count = 0;
  for (const auto& tx : transmissions)
    if (tx.encoded) ++count;
  return count;
}

SimTrace run_closed_loop(const PlantModel& plant, const BoundsConfig& bounds,
                         const ObserverCertificate& cert, const QuantizerConfig& qcfg,
                         SchemeKind scheme, const SignalSpec& signals, const SimOptions& opts) {
  plant.validate();
  const std::size_t n = plant.state_dim();
  const std::size_t m = plant.input_dim();
  const std::size_t o = plant.dist_dim();
  require(bounds.x_c.size() == n, "run_closed_loop: x_c dimension mismatch");
  require(bounds.x_b > 0.0, "run_closed_loop: x_b must be positive");
  require(bounds.u_b >= 0.0 && bounds.d_b >= 0.0, "run_closed_loop: negative signal bound");
  require(qcfg.levels >= 2, "run_closed_loop: N must be at least 2");
  require(qcfg.dim == n, "run_closed_loop: quantizer dimension mismatch");
  require(opts.T > 0.0 && opts.dt > 0.0 && opts.horizon > 0.0,
          "run_closed_loop: T, dt and horizon must be positive");

  const std::size_t tx_steps = steps_on_grid(opts.T, opts.dt, "T");
  const std::size_t total_steps = steps_on_grid(opts.horizon, opts.dt, "horizon");

  Vec x0 = opts.x0.empty() ? bounds.x_c : opts.x0;
  require(x0.size() == n, "run_closed_loop: x0 dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    require(std::abs(x0[i] - bounds.x_c[i]) <= bounds.x_b + kBoundSlack,
            "run_closed_loop: x0 outside the initial-state box");

  const CertificateReport cert_report = verify_certificate(plant, cert);
  if (!cert_report.pass)
    throw CertificateError("certificate rejected: max block eigenvalue " +
                           fmt(cert_report.max_eigenvalue) + " exceeds " +
                           fmt(cert_report.tolerance));
  const FeasibilityReport feas = scheme == SchemeKind::SetBased
                                     ? feasibility_set(plant.A, opts.T, qcfg.levels)
                                     : feasibility_norm(plant.A, opts.T, qcfg.levels);
  if (!feas.feasible)
    throw InfeasibleError(std::string(scheme_name(scheme)) +
                          " scheme infeasible: contraction factor " + fmt(feas.lhs) +
                          " not below 1");

  const ObserverGains gains = derive_gains(cert, plant);
  const ErrorBounds eb(cert, gains, plant, bounds);
  const Mat lambda = mat_exp(plant.A, opts.T);
  const Mat lambda_bar = entrywise_abs(lambda);
  const double a_norm = induced_inf_norm(plant.A);
  const double kh_norm = induced_inf_norm(gains.K * plant.H);

  SimTrace tr;
  tr.scheme = scheme;
  tr.seed = opts.seed;
  tr.levels = qcfg.levels;
  tr.T = opts.T;
  tr.dt = opts.dt;
  tr.horizon = opts.horizon;
  tr.growth = opts.growth;
  tr.decoder = opts.decoder;
  tr.rng = SplitMix64::name();
  tr.n = n;
  tr.m = m;
  tr.o = o;

  const std::size_t rows = total_steps + 1;
  tr.t.reserve(rows);
  tr.x.reserve(rows);
  tr.xhat.reserve(rows);
  tr.xr.reserve(rows);
  tr.region_center.reserve(rows);
  tr.region_halfwidth.reserve(rows);
  tr.eq.reserve(rows);
  tr.eq_bar.reserve(rows);
  tr.ehat_norm.reserve(rows);
  tr.er_norm.reserve(rows);
  tr.est_bound.reserve(rows);
  tr.rec_bound.reserve(rows);
  tr.is_transmission.reserve(rows);
  tr.region_k.reserve(rows);
  tr.transmissions.reserve(total_steps / tx_steps + 1);

  Vec x = x0;
  Vec xh = bounds.x_c;
  Vec xr = bounds.x_c;
  QuantizerState qs{bounds.x_c, Vec(n, bounds.x_b), 0};

  // Region of the most recent transmission; packets decode against it.
  Vec c_log = qs.C, l_log = qs.L, pd_log = bounds.x_c;
  std::uint32_t k_log = 0;

  SplitMix64 rng(opts.seed);
  std::size_t hold_steps = 1;
  if (signals.disturbance == SignalSpec::Disturbance::SeededUniform && signals.dist_hold > 0.0)
    hold_steps = steps_on_grid(signals.dist_hold, opts.dt, "disturbance hold");

  Vec d_cur(o, 0.0);
  double sup_u = 0.0, sup_d = 0.0, sup_eh = 0.0, sup_eq = 0.0;
  double er_tk = 0.0, t_last = 0.0;

  for (std::size_t i = 0; i <= total_steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;

    // Disturbance value covering [t, t + dt); redrawn at hold boundaries.
    if (signals.disturbance == SignalSpec::Disturbance::SeededUniform) {
      if (i % hold_steps == 0)
        for (std::size_t c = 0; c < o; ++c)
          d_cur[c] = rng.uniform(-signals.dist_bound, signals.dist_bound);
    } else if (signals.disturbance == SignalSpec::Disturbance::Table) {
      d_cur = signals.dist_table_at(t, o);
    }

    const Vec u = signals.input_at(t, m);
    if (inf_norm(plant.B * u) > bounds.u_b + kBoundSlack)
      throw std::runtime_error("input bound violated at t = " + fmt(t));
    if (inf_norm(plant.E * d_cur) > bounds.d_b + kBoundSlack)
      throw std::runtime_error("disturbance bound violated at t = " + fmt(t));

    bool event = false;
    if (i % tx_steps == 0) {
      event = true;
      const auto k = static_cast<std::uint32_t>(i / tx_steps);
      Transmission rec;
      rec.k = k;
      rec.t = t;
      if (k == 0) {
        // Agreed initialization; both sides start from the region center.
        rec.encoded = false;
        rec.pe.k = 0;
        rec.pd = DecodedPacket{0, bounds.x_c};
      } else {
        rec.encoded = true;
        rec.pe = encode(xh, qs, qcfg.levels);
        rec.pd = decode(rec.pe, qs, qcfg.levels, opts.decoder);
      }
      xr = rec.pd.value;

      rec.region_center = qs.C;
      rec.region_halfwidth = qs.L;
      rec.eq_bar.resize(n);
      for (std::size_t a = 0; a < n; ++a) rec.eq_bar[a] = qs.L[a] / qcfg.levels;
      rec.beta_ue = input_error_inflation(a_norm, opts.T, bounds.u_b, kh_norm,
                                          eb.estimation_error_bound(t), opts.growth);

      c_log = qs.C;
      l_log = qs.L;
      k_log = k;
      pd_log = rec.pd.value;

      qs = scheme == SchemeKind::SetBased
               ? set_based_update(qs, rec.pd, lambda, lambda_bar, rec.beta_ue, qcfg.levels)
               : norm_based_update(qs, rec.pd, lambda, a_norm, opts.T, rec.beta_ue, qcfg.levels);

      tr.transmissions.push_back(std::move(rec));

      sup_u = sup_d = sup_eh = sup_eq = 0.0;
      t_last = t;
      double e = 0.0;
      for (std::size_t a = 0; a < n; ++a) e = std::max(e, std::abs(x[a] - xr[a]));
      er_tk = e;
    }

    Vec eqv(n), erv(n);
    double ehn = 0.0, ern = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      eqv[a] = xh[a] - pd_log[a];
      erv[a] = x[a] - xr[a];
      ehn = std::max(ehn, std::abs(x[a] - xh[a]));
      ern = std::max(ern, std::abs(erv[a]));
    }
    sup_u = std::max(sup_u, inf_norm(u));
    sup_d = std::max(sup_d, d_cur.empty() ? 0.0 : inf_norm(d_cur));
    sup_eh = std::max(sup_eh, ehn);
    sup_eq = std::max(sup_eq, inf_norm(eqv));

    Vec eqb(n);
    for (std::size_t a = 0; a < n; ++a) eqb[a] = l_log[a] / qcfg.levels;

    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.xhat.push_back(xh);
    tr.xr.push_back(xr);
    tr.region_center.push_back(c_log);
    tr.region_halfwidth.push_back(l_log);
    tr.eq.push_back(std::move(eqv));
    tr.eq_bar.push_back(std::move(eqb));
    tr.ehat_norm.push_back(ehn);
    tr.er_norm.push_back(ern);
    tr.est_bound.push_back(eb.estimation_error_bound(t));
    tr.rec_bound.push_back(
        eb.reconstruction_error_bound(er_tk, t - t_last, sup_u, sup_d, sup_eh, sup_eq));
    tr.is_transmission.push_back(event ? 1 : 0);
    tr.region_k.push_back(k_log);

    if (i == total_steps) break;

    const VectorField field = [&](double tau, const Vec& z) {
      const Vec u_tau = signals.input_at(tau, m);
      Vec dz(3 * n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        double ax = 0.0, axh = 0.0, axr = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          ax += plant.A(r, c) * z[c];
          axh += plant.A(r, c) * z[n + c];
          axr += plant.A(r, c) * z[2 * n + c];
        }
        double bu = 0.0;
        for (std::size_t c = 0; c < m; ++c) bu += plant.B(r, c) * u_tau[c];
        double ed = 0.0;
        for (std::size_t c = 0; c < o; ++c) ed += plant.E(r, c) * d_cur[c];
        dz[r] = ax + bu + ed;
        dz[n + r] = axh + bu;
        dz[2 * n + r] = axr;
      }
      // Output-injection terms K(H xhat - H x) and Kr(H xr - H Pd).
      const std::size_t ny = plant.output_dim();
      for (std::size_t q = 0; q < ny; ++q) {
        double yh = 0.0, y = 0.0, yr = 0.0, ypd = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          y += plant.H(q, c) * z[c];
          yh += plant.H(q, c) * z[n + c];
          yr += plant.H(q, c) * z[2 * n + c];
          ypd += plant.H(q, c) * pd_log[c];
        }
        for (std::size_t r = 0; r < n; ++r) {
          dz[n + r] += gains.K(r, q) * (yh - y);
          dz[2 * n + r] += gains.Kr(r, q) * (yr - ypd);
        }
      }
      return dz;
    };

    Vec z(3 * n);
    for (std::size_t a = 0; a < n; ++a) {
      z[a] = x[a];
      z[n + a] = xh[a];
      z[2 * n + a] = xr[a];
    }
    z = rk4_step(field, t, z, opts.dt);
    for (std::size_t a = 0; a < n; ++a) {
      x[a] = z[a];
      xh[a] = z[n + a];
      xr[a] = z[2 * n + a];
    }
  }

  return tr;
}

std::string SimTrace::csv() const {
  std::string out;
  out.reserve(sample_count() * (40 * (7 * n + 7) / 2) + 512);

  out += "# scheme=";
  out += scheme_name(scheme);
  out += "\n# seed=" + std::to_string(seed);
  out += "\n# levels=" + std::to_string(levels);
  out += "\n# T=" + fmt(T);
  out += "\n# dt=" + fmt(dt);
  out += "\n# horizon=" + fmt(horizon);
  out += "\n# growth=";
  out += growth_name(growth);
  out += "\n# decoder=";
  out += decoder_name(decoder);
  out += "\n# rng=" + rng;
  out += "\n# n=" + std::to_string(n);
  out += "\n# m=" + std::to_string(m);
  out += "\n# o=" + std::to_string(o);
  out += "\n";

  out += "t";
  const auto axis_block = [&](const char* stem) {
    for (std::size_t a = 1; a <= n; ++a) out += "," + std::string(stem) + "_" + std::to_string(a);
  };
  axis_block("x");
  axis_block("xhat");
  axis_block("xr");
  axis_block("C");
  axis_block("L");
  axis_block("eq");
  axis_block("eqbar");
  out += ",ehat_norm,er_norm,est_bound,rec_bound,is_transmission,k";
  axis_block("pe");
  out += "\n";

  for (std::size_t i = 0; i < sample_count(); ++i) {
    out += fmt(t[i]);
    const auto vec_block = [&](const std::vector<Vec>& col) {
      for (std::size_t a = 0; a < n; ++a) out += "," + fmt(col[i][a]);
    };
    vec_block(x);
    vec_block(xhat);
    vec_block(xr);
    vec_block(region_center);
    vec_block(region_halfwidth);
    vec_block(eq);
    vec_block(eq_bar);
    out += "," + fmt(ehat_norm[i]);
    out += "," + fmt(er_norm[i]);
    out += "," + fmt(est_bound[i]);
    out += "," + fmt(rec_bound[i]);
    out += "," + std::to_string(static_cast<int>(is_transmission[i]));
    out += "," + std::to_string(region_k[i]);
    const Transmission& tx = transmissions[region_k[i]];
    for (std::size_t a = 0; a < n; ++a)
      out += "," + (tx.encoded ? std::to_string(tx.pe.indices[a]) : std::string("-1"));
    out += "\n";
  }
  return out;
}

void SimTrace::write_csv(std::ostream& os) const { os << csv(); }

void SimTrace::write_packets(std::ostream& os) const {
  std::vector<std::uint8_t> wire;
  wire.reserve(transmissions.size() * (4 + 2 * n));
  for (const auto& tx : transmissions)
    if (tx.encoded) append_packet_wire(wire, tx.pe);
  os.write(reinterpret_cast<const char*>(wire.data()), static_cast<std::streamsize>(wire.size()));
}

SteadyState steady_state_metrics(const SimTrace& trace, double tail_fraction) {
  require(tail_fraction > 0.0 && tail_fraction <= 1.0,
          "steady_state_metrics: tail_fraction must be in (0, 1]");
  require(trace.sample_count() > 0, "steady_state_metrics: empty trace");

  std::vector<std::size_t> tx_rows;
  for (std::size_t i = 0; i < trace.sample_count(); ++i)
    if (trace.is_transmission[i] && trace.region_k[i] >= 1) tx_rows.push_back(i);
  require(tx_rows.size() >= 8, "steady_state_metrics: needs at least 8 encoded transmissions");

  SteadyState out;
  const auto tx_tail =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::ceil(tail_fraction * static_cast<double>(tx_rows.size()))));
  for (std::size_t j = tx_rows.size() - tx_tail; j < tx_rows.size(); ++j)
    out.eq_inf = std::max(out.eq_inf, inf_norm(trace.eq[tx_rows[j]]));

  const auto sample_tail = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(tail_fraction * static_cast<double>(trace.sample_count()))));
  for (std::size_t i = trace.sample_count() - sample_tail; i < trace.sample_count(); ++i)
    out.er_inf = std::max(out.er_inf, trace.er_norm[i]);
  return out;
}

}  // namespace reachquant
