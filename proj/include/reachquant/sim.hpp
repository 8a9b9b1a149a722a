#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reachquant/numerics.hpp"
#include "reachquant/observer.hpp"
#include "reachquant/quantizer.hpp"
#include "reachquant/reachability.hpp"
#include "reachquant/schemes.hpp"

namespace reachquant {

/// Exogenous signals of a run. The input u(t) is either zero, a sinusoid
/// amplitude * sin(angular_freq * t + phase) applied to every input channel,
/// or a piecewise-constant table. The disturbance d(t) is either zero, a
/// seeded per-channel uniform draw in [-dist_bound, dist_bound] held for
/// dist_hold seconds (0 means one integration step), or a table.
struct SignalSpec {
  enum class Input { Zero, Sinusoid, Table };
  enum class Disturbance { Zero, SeededUniform, Table };

  Input input = Input::Zero;
  double amplitude = 0.0;
  double angular_freq = 0.0;
  double phase = 0.0;
  std::vector<std::pair<double, Vec>> input_table;  // (time, value), sorted, from t = 0

  Disturbance disturbance = Disturbance::Zero;
  double dist_bound = 0.0;
  double dist_hold = 0.0;
  std::vector<std::pair<double, Vec>> dist_table;

  Vec input_at(double t, std::size_t m) const;
  Vec dist_table_at(double t, std::size_t o) const;

  friend bool operator==(const SignalSpec&, const SignalSpec&) = default;
};

struct SimOptions {
  double T = 0.0;        // inter-transmission interval; must be a multiple of dt
  double horizon = 0.0;  // total simulated time; must be a multiple of dt
  double dt = 1e-3;
  std::uint64_t seed = 0;
  Vec x0;                // plant initial state; empty means x_c
  GrowthBound growth = GrowthBound::Integral;
  DecoderRange decoder = DecoderRange::Full;
};

/// One network event. k = 0 is the agreed initialization (P_d^0 = x_c agreed
/// by both sides, nothing sent); encoded is true from k = 1 on.
struct Transmission {
  std::uint32_t k = 0;
  double t = 0.0;
  bool encoded = false;
  EncodedPacket pe;
  DecodedPacket pd;
  Vec region_center;     // region the packet was encoded against (C^k)
  Vec region_halfwidth;  // L^k
  Vec eq_bar;            // L^k / N
  double beta_ue = 0.0;  // inflation used in the k -> k+1 region update
};

/// Full run record. Per-sample arrays are aligned; region columns carry the
/// region of the most recent transmission (the one the last packet was
/// encoded against). The CSV layout is documented in the README.
struct SimTrace {
  SchemeKind scheme = SchemeKind::SetBased;
  std::uint64_t seed = 0;
  int levels = 0;
  double T = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  GrowthBound growth = GrowthBound::Integral;
  DecoderRange decoder = DecoderRange::Full;
  std::string rng;
  std::size_t n = 0, m = 0, o = 0;

  std::vector<double> t;
  std::vector<Vec> x, xhat, xr;
  std::vector<Vec> region_center, region_halfwidth;
  std::vector<Vec> eq;       // xhat(t) - P_d^k for the latest k
  std::vector<Vec> eq_bar;   // L^k / N for the latest k
  std::vector<double> ehat_norm, er_norm;
  std::vector<double> est_bound;  // estimation-error envelope at each sample
  std::vector<double> rec_bound;  // reconstruction-error envelope at each sample
  std::vector<std::uint8_t> is_transmission;
  std::vector<std::uint32_t> region_k;

  std::vector<Transmission> transmissions;

  std::size_t sample_count() const noexcept { return t.size(); }
  std::size_t encoded_count() const;

  std::string csv() const;
  void write_csv(std::ostream& os) const;
  void write_packets(std::ostream& os) const;
};

/// Integrates plant, local estimator and remote reconstructor over the
/// horizon with transmissions every T seconds. Gates on a verified
/// certificate and a feasible (T, N) for the chosen scheme. The encoder
/// raises QuantizerOverflow if the estimate ever leaves the active region.
SimTrace run_closed_loop(const PlantModel& plant, const BoundsConfig& bounds,
                         const ObserverCertificate& cert, const QuantizerConfig& qcfg,
                         SchemeKind scheme, const SignalSpec& signals, const SimOptions& opts);

struct SteadyState {
  double eq_inf = 0.0;  // max |e_q^k| over the last tail fraction of transmissions
  double er_inf = 0.0;  // max |e_r(t)| over the last tail fraction of samples
};

/// Tail metrics; requires at least 8 encoded transmissions.
SteadyState steady_state_metrics(const SimTrace& trace, double tail_fraction = 0.25);

}  // namespace reachquant
