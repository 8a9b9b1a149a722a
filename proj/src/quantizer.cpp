#include "reachquant/quantizer.hpp"

#include <cmath>
#include <stdexcept>

#include "reachquant/errors.hpp"

namespace reachquant {

namespace {

constexpr double kOverflowSlack = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_state(const QuantizerState& qs, int levels) {
  require(levels >= 2, "quantizer: N must be at least 2");
  require(!qs.C.empty() && qs.C.size() == qs.L.size(), "quantizer: malformed region");
  for (double l : qs.L) require(l > 0.0, "quantizer: region half-widths must be positive");
}

int log2_exact(int levels) {
  require(levels >= 2, "quantizer: N must be at least 2");
  int b = 0;
  int v = levels;
  while ((v & 1) == 0) {
    v >>= 1;
    ++b;
  }
  require(v == 1, "quantizer: N must be a power of two for bit packing");
  return b;
}

}  // namespace

QuantizerConfig QuantizerConfig::from_levels(int levels, std::size_t dim) {
  require(levels >= 2, "QuantizerConfig: N must be at least 2");
  require(levels <= 65536, "QuantizerConfig: N must fit 16-bit packet indices");
  require(dim > 0, "QuantizerConfig: dimension must be positive");
  QuantizerConfig cfg;
  cfg.levels = levels;
  cfg.dim = dim;
  cfg.bits = ((levels & (levels - 1)) == 0) ? static_cast<int>(dim) * log2_exact(levels) : 0;
  return cfg;
}

QuantizerConfig QuantizerConfig::from_bits(int bits, std::size_t dim) {
  require(dim > 0, "QuantizerConfig: dimension must be positive");
  require(bits > 0 && bits % static_cast<int>(dim) == 0,
          "QuantizerConfig: Br must be a positive multiple of n");
  const int per_axis = bits / static_cast<int>(dim);
  require(per_axis >= 1 && per_axis < 16, "QuantizerConfig: Br/n must be in [1, 15]");
  QuantizerConfig cfg;
  cfg.bits = bits;
  cfg.dim = dim;
  cfg.levels = 1 << per_axis;
  return cfg;
}

EncodedPacket encode(const Vec& xhat, const QuantizerState& qs, int levels) {
  check_state(qs, levels);
  require(xhat.size() == qs.C.size(), "encode: dimension mismatch");

  EncodedPacket packet;
  packet.k = qs.k;
  packet.indices.resize(xhat.size());
  for (std::size_t i = 0; i < xhat.size(); ++i) {
    const double lo = qs.C[i] - qs.L[i];
    const double hi = qs.C[i] + qs.L[i];
    if (xhat[i] < lo - kOverflowSlack || xhat[i] > hi + kOverflowSlack)
      throw QuantizerOverflow(i, xhat[i], lo, hi, qs.k);
    const double raw = std::floor((xhat[i] + qs.L[i] - qs.C[i]) * levels / (2.0 * qs.L[i]));
    // Region boundaries (and the slack band) fold into the outermost cells.
    const double clamped = std::min(std::max(raw, 0.0), static_cast<double>(levels - 1));
    packet.indices[i] = static_cast<std::uint16_t>(clamped);
  }
  return packet;
}

DecodedPacket decode(const EncodedPacket& packet, const QuantizerState& qs, int levels,
                     DecoderRange range) {
  check_state(qs, levels);
  require(packet.indices.size() == qs.C.size(), "decode: dimension mismatch");

  DecodedPacket out;
  out.k = packet.k;
  out.value.resize(packet.indices.size());
  for (std::size_t i = 0; i < packet.indices.size(); ++i) {
    require(packet.indices[i] < static_cast<std::uint16_t>(levels), "decode: index out of range");
    const double p = static_cast<double>(packet.indices[i]);
    if (range == DecoderRange::Full) {
      out.value[i] = qs.C[i] - qs.L[i] + qs.L[i] / levels * (2.0 * p + 1.0);
    } else {
      out.value[i] = qs.C[i] - qs.L[i] / 2.0 + qs.L[i] / (2.0 * levels) * (2.0 * p + 1.0);
    }
  }
  return out;
}

Vec max_qerror_step(const Vec& eq_bar, const Mat& lambda_bar, double beta_ue, int levels) {
  require(levels >= 2, "max_qerror_step: N must be at least 2");
  require(beta_ue >= 0.0, "max_qerror_step: beta_ue must be nonnegative");
  require(lambda_bar.square() && lambda_bar.rows() == eq_bar.size(),
          "max_qerror_step: dimension mismatch");
  for (double e : eq_bar) require(e >= 0.0, "max_qerror_step: eq_bar must be nonnegative");
  for (double v : lambda_bar.data())
    require(v >= 0.0, "max_qerror_step: lambda_bar must be nonnegative");

  Vec out(eq_bar.size(), 0.0);
  for (std::size_t i = 0; i < eq_bar.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < eq_bar.size(); ++j) acc += lambda_bar(i, j) * eq_bar[j];
    out[i] = acc / levels + beta_ue / levels;
  }
  return out;
}

Mat abs_matrix(const Mat& m) { return entrywise_abs(m); }

void append_packet_wire(std::vector<std::uint8_t>& out, const EncodedPacket& packet) {
  out.push_back(static_cast<std::uint8_t>(packet.k & 0xff));
  out.push_back(static_cast<std::uint8_t>((packet.k >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((packet.k >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((packet.k >> 24) & 0xff));
  for (std::uint16_t idx : packet.indices) {
    out.push_back(static_cast<std::uint8_t>(idx & 0xff));
    out.push_back(static_cast<std::uint8_t>((idx >> 8) & 0xff));
  }
}

std::vector<std::uint8_t> pack_indices(const EncodedPacket& packet, int levels) {
  const int bits_per_axis = log2_exact(levels);
  std::vector<std::uint8_t> out;
  int bit_pos = 0;
  for (std::uint16_t idx : packet.indices) {
    require(idx < static_cast<std::uint16_t>(levels), "pack_indices: index out of range");
    for (int b = bits_per_axis - 1; b >= 0; --b) {
      if (bit_pos % 8 == 0) out.push_back(0);
      if ((idx >> b) & 1) out.back() |= static_cast<std::uint8_t>(1 << (7 - bit_pos % 8));
      ++bit_pos;
    }
  }
  return out;
}

std::size_t payload_bits(std::size_t dim, int levels) {
  require(dim > 0, "payload_bits: dimension must be positive");
  return dim * static_cast<std::size_t>(log2_exact(levels));
}

}  // namespace reachquant
