#pragma once

#include <cstdint>
#include <vector>

#include "reachquant/numerics.hpp"

namespace reachquant {

/// Per-axis resolution of the uniform quantizer. levels (N) is the cell count
/// per axis; bits (Br) is the total payload per transmission when N is a
/// power of two, else 0.
struct QuantizerConfig {
  int levels = 0;
  int bits = 0;
  std::size_t dim = 0;

  static QuantizerConfig from_levels(int levels, std::size_t dim);

  /// Derives N = 2^{Br/n}. Br must be a positive multiple of n with
  /// Br/n >= 1 so that N >= 2.
  static QuantizerConfig from_bits(int bits, std::size_t dim);

  friend bool operator==(const QuantizerConfig&, const QuantizerConfig&) = default;
};

/// Quantization region at step k: the box spans [C - L, C + L] per axis with
/// all L entries positive.
struct QuantizerState {
  Vec C;
  Vec L;
  std::uint32_t k = 0;
};

struct EncodedPacket {
  std::uint32_t k = 0;
  std::vector<std::uint16_t> indices;

  friend bool operator==(const EncodedPacket&, const EncodedPacket&) = default;
};

struct DecodedPacket {
  std::uint32_t k = 0;
  Vec value;
};

/// Geometry used to map an index back to a cell centroid. Full spans the
/// whole region [C - L, C + L] and inverts the encoder exactly. Half is a
/// historical variant spanning [C - L/2, C + L/2]; it does not invert the
/// encoder and is kept only behind an explicit switch.
enum class DecoderRange { Full, Half };

/// Per-axis cell index: floor((x_i + L_i - C_i) N / (2 L_i)), clamped into
/// [0, N-1] so that the upper boundary maps to the last cell. Values outside
/// the region beyond 1e-12 absolute slack raise QuantizerOverflow carrying
/// the offending axis.
EncodedPacket encode(const Vec& xhat, const QuantizerState& qs, int levels);

/// Cell centroid for each index: C_i - L_i + (L_i/N)(2 p_i + 1) under
/// DecoderRange::Full. Decoded values always lie strictly inside the region.
DecodedPacket decode(const EncodedPacket& packet, const QuantizerState& qs, int levels,
                     DecoderRange range = DecoderRange::Full);

/// One step of the worst-case quantization error recursion:
/// e' = (Lambda_bar / N) e + (beta_ue / N) 1.
Vec max_qerror_step(const Vec& eq_bar, const Mat& lambda_bar, double beta_ue, int levels);

/// Entrywise absolute value (companion helper used by the region updates).
Mat abs_matrix(const Mat& m);

/// Trace wire format: k as unsigned 32-bit little-endian, then one unsigned
/// 16-bit little-endian word per axis.
void append_packet_wire(std::vector<std::uint8_t>& out, const EncodedPacket& packet);

/// Minimal payload: indices bit-packed MSB-first, log2(N) bits per axis.
/// Requires N to be a power of two.
std::vector<std::uint8_t> pack_indices(const EncodedPacket& packet, int levels);

/// Exact payload size in bits of pack_indices output before byte padding:
/// n * log2(N). Requires N to be a power of two.
std::size_t payload_bits(std::size_t dim, int levels);

}  // namespace reachquant
