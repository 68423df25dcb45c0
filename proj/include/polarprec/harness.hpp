#pragma once

// End-to-end polar-coded MIMO link: precoder selection, SIC receiver,
// Monte Carlo BLER runner, GA bound and capacity-profile sweeps.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polarprec/channel.hpp"
#include "polarprec/modem.hpp"
#include "polarprec/numerics.hpp"
#include "polarprec/polar_code.hpp"
#include "polarprec/precoding.hpp"

namespace polarprec {

enum class TpcMode { none, dft, polar, f_opt, polar_qopt };
enum class DecoderKind { sc, cascl };
enum class ChannelMode { fading, fixed_reference };
// Fading only: rebuild the code for every frame from that frame's substream
// capacities, or build one code per SNR point from averaged capacities.
enum class ConstructionMode { per_frame, averaged };

std::string_view to_string(TpcMode mode);
std::string_view to_string(DecoderKind kind);
std::string_view to_string(ChannelMode mode);
std::string_view to_string(ConstructionMode mode);
TpcMode parse_tpc_mode(std::string_view text);
DecoderKind parse_decoder(std::string_view text);
ChannelMode parse_channel_mode(std::string_view text);
ConstructionMode parse_construction_mode(std::string_view text);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SystemConfig {
  int m_t = 3;
  int m_r = 3;
  int m = 2;
  int n = 64;  // slots per frame; each stream's code length is 2n
  double rate = 0.25;
  std::vector<double> snr_db{0.0};
  TpcMode tpc = TpcMode::none;
  int b = 0;   // DFT budget
  int b1 = 0;  // W budget
  int b2 = 0;  // Q budget
  DecoderKind decoder = DecoderKind::sc;
  int list_size = 8;
  int crc_len = 0;
  long frames = 1000;
  std::uint64_t master_seed = 1;
  ChannelMode channel = ChannelMode::fixed_reference;

  // Codebook training; the seed is derived from master_seed when unset.
  long codebook_trials = 10000;
  std::optional<std::uint64_t> codebook_seed;
  // Codebooks to use instead of training (DFT book, or W then Q books).
  std::vector<Codebook> codebooks;
  ConstructionMode construction = ConstructionMode::per_frame;
  // Fading runs draw this many independent channels per SNR point for the
  // GA bound (and, when averaged, for the code itself).
  int construction_draws = 1000;
  int workers = 0;  // 0 = hardware concurrency
};

/// Throws ConfigError describing the first violated constraint.
void validate(const SystemConfig& config);
int payload_bits(const SystemConfig& config);
CrcPolynomial crc_for(const SystemConfig& config);

struct SnrRecord {
  double snr_db = 0.0;
  long frames = 0;
  long block_errors = 0;
  long bit_errors = 0;
  std::optional<double> bler;
  std::optional<double> ber;
  double ga_bound = 0.0;
  double capacity_mean = 0.0;
  double polarization_mean = 0.0;
};

struct SimResult {
  SystemConfig config;
  std::vector<SnrRecord> records;
  std::vector<std::string> codebook_digests;
  std::string construction;  // how the information sets were chosen
  std::vector<PolarSpec> codes;  // code per SNR point; empty for per-frame construction
};

/// Codebooks plus the per-frame precoder choice for one TPC mode.
class PrecoderSelector {
 public:
  explicit PrecoderSelector(const SystemConfig& config);

  struct Choice {
    ComplexMatrix f;
    double capacity = 0.0;
    SelectionCost cost;
  };
  Choice select(const ComplexMatrix& h, double es_over_n0) const;

  const std::vector<Codebook>& codebooks() const { return books_; }

 private:
  TpcMode mode_;
  int m_t_;
  int m_;
  std::vector<Codebook> books_;  // dft: {F}; polar / polar_qopt: {W, Q} or {W}
};

struct ReceivedFrame {
  std::vector<Bits> info;  // per stream, CRC included
  std::vector<std::uint8_t> crc_ok;
};

/// Reusable SIC receiver. Streams are detected in order 0..M-1; stream i is
/// demapped after cancelling 0..i-1 with their re-encoded decisions (or the
/// supplied genie symbols).
class SicReceiver {
 public:
  SicReceiver(const PolarSpec& spec, DecoderKind decoder);
  /// Swaps in another code of the same length, stream count and list size.
  void set_code(const PolarSpec& spec);
  ReceivedFrame receive(const ComplexMatrix& y, const ComplexMatrix& g, double es, double n0,
                        const ComplexMatrix* genie_symbols = nullptr);

 private:
  PolarSpec spec_;
  DecoderKind decoder_;
  ScDecoder sc_;
  ScListDecoder scl_;
  std::vector<double> llrs_;
};

ReceivedFrame receive_frame(const ComplexMatrix& y, const ComplexMatrix& h, const ComplexMatrix& f,
                            const PolarSpec& spec, double es, double n0, DecoderKind decoder);

/// Capacity-matched GA profile: substream i behaves like a scalar Gaussian
/// channel of SNR 2^{I_i} - 1, whose QPSK bit LLRs have mean 2 * SNR.
ReliabilityProfile ga_profile_from_capacities(const std::vector<double>& capacities, int code_len);
ReliabilityProfile ga_profile_for(const ComplexMatrix& h, const ComplexMatrix& f, double es_over_n0, int code_len);

/// The code a configuration uses on a channel with the given substream
/// capacities: GA profile, then per-stream CRC room, then joint selection.
PolarSpec build_code(const SystemConfig& config, const std::vector<double>& capacities);

/// Builds the transmit-side frame: demultiplexes payload over the streams,
/// attaches the per-stream CRC, encodes and maps. Returns M x N symbols.
ComplexMatrix encode_frame(std::span<const std::uint8_t> payload, const PolarSpec& spec);

SimResult run_bler(const SystemConfig& config);

struct CapacityProfileRow {
  double snr_db = 0.0;
  TpcMode mode = TpcMode::none;
  SubstreamProfile profile;
};

/// Substream capacities versus SNR for each mode. Fixed channel: one
/// evaluation per point; fading: mean over config.frames draws.
std::vector<CapacityProfileRow> run_capacity_profile(const SystemConfig& config, const std::vector<TpcMode>& modes);

std::string bler_csv(const SimResult& result);
std::string capacity_profile_csv(const std::vector<CapacityProfileRow>& rows);
/// JSON echo of the configuration, seeds, codebook digests and construction.
std::string result_metadata_json(const SimResult& result);

}  // namespace polarprec
