#pragma once

// Per-stream polar component codes: GA construction, encoding, CRC and
// SC / CRC-aided SC-list decoding.
//
// Indexing is natural (not bit-reversed) on both ends: the codeword is
// x = u F^{(x)n} with F = [1 0; 1 1], u_0 is the least reliable synthesized
// channel and u_{N-1} the most reliable one. LLRs follow ln P(0)/P(1).

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace polarprec {

using Bits = std::vector<std::uint8_t>;

namespace limits {
// Magnitude that stands for a noiseless observation.
inline constexpr double noiseless_llr = 40.0;
// Upper clamp on GA LLR means.
inline constexpr double ga_mean_cap = 1e5;
}  // namespace limits

/// Generator polynomial including the x^length term, e.g. 0x61 = x^6+x^5+1.
struct CrcPolynomial {
  int length = 0;
  std::uint32_t poly = 0;
};

/// The 6-bit CRC of 5G NR polar codes, x^6 + x^5 + 1.
inline constexpr CrcPolynomial kNrCrc6{6, 0x61};

struct PolarSpec {
  int code_len = 0;       // per stream, 2^n
  int streams = 0;        // M
  int payload_bits = 0;   // K, CRC excluded
  CrcPolynomial crc{};    // length 0 disables CRC
  int list_size = 1;
  std::vector<std::vector<int>> info_sets;     // ascending, CRC positions included
  std::vector<std::vector<std::uint8_t>> frozen;  // 1 = frozen, per stream

  int info_size(int stream) const { return static_cast<int>(info_sets.at(stream).size()); }
  int payload_size(int stream) const { return info_size(stream) - crc.length; }
  double rate() const { return static_cast<double>(payload_bits) / (static_cast<double>(streams) * code_len); }
};

/// Validates and fills the frozen masks. Each stream carries its own CRC
/// inside its information set, so sum |A_i| = K + M * crc.length.
PolarSpec make_polar_spec(int code_len, int streams, int payload_bits, std::vector<std::vector<int>> info_sets,
                          CrcPolynomial crc = {}, int list_size = 1);

struct ReliabilityProfile {
  std::vector<std::vector<double>> llr_means;  // [stream][bit channel]
};

// ---- Gaussian approximation -------------------------------------------------

/// phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x), in the usual two-piece closed
/// form (exp(-0.4527 x^0.86 + 0.0218) below 10, sqrt(pi/x) e^{-x/4}
/// (1 - 10/(7x)) above). The upper piece is capped at the value the lower
/// piece reaches at 10 so that phi stays non-increasing, and below 0.1 the
/// lower piece (which exceeds 1 near 0) is replaced by its chord to (0, 1).
double ga_phi(double x);
/// ln phi(x), accurate where phi(x) underflows.
double ga_log_phi(double x);
/// Smallest x with phi(x) <= exp(log_y), to 1e-9; capped at ga_mean_cap.
double ga_phi_inverse_log(double log_y);
double ga_phi_inverse(double y);
/// Mean of the check-node output for two inputs of mean m.
double ga_check_node(double m);

/// Synthesized-channel LLR means for a length-code_len code whose channel
/// LLRs have mean initial_llr_mean.
std::vector<double> ga_evolve(double initial_llr_mean, int code_len);

/// Picks the `count` best synthesized channels across all streams jointly.
/// Ties go to the lower (stream, bit) pair. Each stream first gets its own
/// `min_per_stream` best channels (room for a per-stream CRC).
std::vector<std::vector<int>> select_info_sets(const ReliabilityProfile& profile, int count, int min_per_stream = 0);

/// 1 - prod_i (1 - Q(sqrt(m_i / 2))) over the selected channels.
double ga_block_error_bound(const ReliabilityProfile& profile, const std::vector<std::vector<int>>& info_sets);

// ---- Encoding and CRC -------------------------------------------------------

/// In-place x = u F^{(x)n}; size must be a power of two.
void polar_transform(std::span<std::uint8_t> bits);

/// Places info_bits on the stream's information set (frozen bits 0) and
/// transforms. info_bits.size() must equal info_size(stream).
Bits polar_encode(std::span<const std::uint8_t> info_bits, const PolarSpec& spec, int stream);

Bits crc_remainder(std::span<const std::uint8_t> bits, CrcPolynomial crc);
Bits crc_attach(std::span<const std::uint8_t> bits, CrcPolynomial crc);
bool crc_check(std::span<const std::uint8_t> bits_with_crc, CrcPolynomial crc);

// ---- Decoding ---------------------------------------------------------------

/// Successive-cancellation decoder with reusable scratch. LLR = 0 decides 0.
class ScDecoder {
 public:
  explicit ScDecoder(int code_len);
  /// Returns the bits at the unfrozen positions, in ascending index order.
  Bits decode(std::span<const double> llrs, std::span<const std::uint8_t> frozen);

 private:
  void node(int level, const double* in, std::uint8_t* bits);

  int code_len_;
  int levels_;
  int leaf_ = 0;
  std::vector<double> scratch_;
  std::vector<std::uint8_t> codeword_;
  std::vector<std::uint8_t> u_;
  std::span<const std::uint8_t> frozen_;
};

struct ListDecodeResult {
  Bits info;            // unfrozen positions, ascending
  bool crc_ok = false;  // true when no CRC is configured
};

/// SC-list decoder with LLR-domain path metrics. Among CRC-passing paths the
/// lowest metric wins; with no passing path the lowest-metric path is
/// returned with crc_ok = false. L = 1 without CRC reproduces ScDecoder.
class ScListDecoder {
 public:
  ScListDecoder(int code_len, int list_size);
  ListDecodeResult decode(std::span<const double> llrs, std::span<const std::uint8_t> frozen, CrcPolynomial crc);

 private:
  void node(int level, int offset);
  void leaf(int index);
  void clone(int from, int to);
  double* scratch(int path, int level) { return scratch_.data() + path * code_len_ + (1 << level) - 1; }
  std::uint8_t* codeword(int path) { return codeword_.data() + path * code_len_; }
  std::uint8_t* u(int path) { return u_.data() + path * code_len_; }

  int code_len_;
  int levels_;
  int list_size_;
  std::span<const double> channel_;
  std::span<const std::uint8_t> frozen_;
  std::vector<double> scratch_;  // per path: levels 0..n-1 at offsets 2^l - 1
  std::vector<std::uint8_t> codeword_;
  std::vector<std::uint8_t> u_;
  std::vector<double> metric_;
  std::vector<std::uint8_t> active_;
  std::vector<int> order_;
};

Bits sc_decode(std::span<const double> llrs, const PolarSpec& spec, int stream);
ListDecodeResult ca_scl_decode(std::span<const double> llrs, const PolarSpec& spec, int stream);

// ---- Construction files -----------------------------------------------------

std::string format_info_sets(const PolarSpec& spec);
PolarSpec parse_info_sets(const std::string& text);
void write_info_sets(const std::filesystem::path& path, const PolarSpec& spec);
PolarSpec read_info_sets(const std::filesystem::path& path);

}  // namespace polarprec
