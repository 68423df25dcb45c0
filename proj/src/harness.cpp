#include "polarprec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace polarprec {

namespace {

// Tags that separate the random streams of the simulator.
constexpr std::uint64_t kTagFrame = 0x4652414dULL;
constexpr std::uint64_t kTagConstruct = 0x434f4e53ULL;
constexpr std::uint64_t kTagCodebook = 0x434f4442ULL;
constexpr std::uint64_t kTagProfile = 0x50524f46ULL;

constexpr long kFramesPerBlock = 64;

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

double es_over_n0_of(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

ComplexMatrix antenna_subset(int m_t, int m) { return ComplexMatrix::Identity(m_t, m); }

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

}  // namespace

std::string_view to_string(TpcMode mode) {
  switch (mode) {
    case TpcMode::none:
      return "none";
    case TpcMode::dft:
      return "dft";
    case TpcMode::polar:
      return "polar";
    case TpcMode::f_opt:
      return "fopt";
    case TpcMode::polar_qopt:
      return "polar-qopt";
  }
  return "?";
}

std::string_view to_string(DecoderKind kind) { return kind == DecoderKind::sc ? "sc" : "cascl"; }

std::string_view to_string(ChannelMode mode) { return mode == ChannelMode::fading ? "fading" : "fixed-eq20"; }
std::string_view to_string(ConstructionMode mode) {
  return mode == ConstructionMode::per_frame ? "per-frame" : "averaged";
}

TpcMode parse_tpc_mode(std::string_view text) {
  if (text == "none") return TpcMode::none;
  if (text == "dft") return TpcMode::dft;
  if (text == "polar") return TpcMode::polar;
  if (text == "fopt" || text == "f_opt") return TpcMode::f_opt;
  if (text == "polar-qopt" || text == "polar_qopt") return TpcMode::polar_qopt;
  throw ConfigError("unknown TPC mode '" + std::string(text) + "'");
}

DecoderKind parse_decoder(std::string_view text) {
  if (text == "sc") return DecoderKind::sc;
  if (text == "cascl") return DecoderKind::cascl;
  throw ConfigError("unknown decoder '" + std::string(text) + "'");
}

ChannelMode parse_channel_mode(std::string_view text) {
  if (text == "fading") return ChannelMode::fading;
  if (text == "fixed-eq20" || text == "fixed") return ChannelMode::fixed_reference;
  throw ConfigError("unknown channel mode '" + std::string(text) + "'");
}

ConstructionMode parse_construction_mode(std::string_view text) {
  if (text == "per-frame" || text == "per_frame") return ConstructionMode::per_frame;
  if (text == "averaged") return ConstructionMode::averaged;
  throw ConfigError("unknown construction mode '" + std::string(text) + "'");
}

int payload_bits(const SystemConfig& config) {
  return static_cast<int>(std::lround(config.rate * 2.0 * config.m * config.n));
}

CrcPolynomial crc_for(const SystemConfig& config) {
  switch (config.crc_len) {
    case 0:
      return {};
    case 6:
      return kNrCrc6;
    case 11:
      return {11, 0xE21};  // x^11+x^10+x^9+x^5+1
    case 16:
      return {16, 0x11021};  // x^16+x^12+x^5+1
    default:
      throw ConfigError("unsupported CRC length " + std::to_string(config.crc_len) + " (use 0, 6, 11 or 16)");
  }
}

void validate(const SystemConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.m_t < 1 || c.m_r < 1 || c.m < 1) fail("antenna and stream counts must be positive");
  if (c.m > std::min(c.m_t, c.m_r)) fail("streams must not exceed min(mt, mr)");
  if (c.m > MlsicDemapper::kMaxTail) fail("ML-SIC supports at most 6 streams");
  if (c.n < 1 || !is_power_of_two(2L * c.n)) fail("2 * slots must be a power of two");
  if (!(c.rate > 0.0 && c.rate <= 1.0)) fail("rate must be in (0, 1]");
  if (c.snr_db.empty()) fail("at least one SNR point is required");
  for (double s : c.snr_db)
    if (!std::isfinite(s)) fail("SNR points must be finite");
  if (c.frames < 0) fail("frame count must be non-negative");
  if (c.workers < 0) fail("worker count must be non-negative");
  if (c.construction_draws < 1) fail("construction draws must be positive");
  if (c.codebook_trials < 1) fail("codebook trials must be positive");

  auto budget = [&](int bits, const char* name) {
    if (bits < 0 || bits > 16) fail(std::string(name) + " must be in [0, 16]");
  };
  switch (c.tpc) {
    case TpcMode::dft:
      budget(c.b, "b");
      break;
    case TpcMode::polar:
      budget(c.b1, "b1");
      budget(c.b2, "b2");
      break;
    case TpcMode::polar_qopt:
      budget(c.b1, "b1");
      break;
    case TpcMode::none:
    case TpcMode::f_opt:
      break;
  }

  if (c.decoder == DecoderKind::cascl && c.list_size < 1) fail("list size must be positive");
  const CrcPolynomial crc = crc_for(c);

  const int k = payload_bits(c);
  if (k < 1) fail("rate * 2 * streams * slots must round to at least one payload bit");
  if (k + c.m * crc.length > 2 * c.m * c.n) fail("payload plus CRC bits exceed the code length");

  if (c.channel == ChannelMode::fixed_reference && (c.m_t != 3 || c.m_r != 3))
    fail("the fixed reference channel is 3 x 3");
}

// ---- Precoder selection -------------------------------------------------------

PrecoderSelector::PrecoderSelector(const SystemConfig& config) : mode_(config.tpc), m_t_(config.m_t), m_(config.m) {
  const std::uint64_t seed = config.codebook_seed.value_or(derive_seed(config.master_seed, {kTagCodebook}));
  auto check_book = [&](const Codebook& book, int rows, int cols, int bits) {
    if (book.m_t != rows || book.m != cols || book.feedback_bits != bits || book.size() != (std::size_t{1} << bits))
      throw ConfigError("supplied codebook does not match the configuration");
  };
  const auto& given = config.codebooks;
  switch (mode_) {
    case TpcMode::dft:
      if (!given.empty()) {
        check_book(given.at(0), m_t_, m_, config.b);
        books_.push_back(given[0]);
      } else {
        books_.push_back(build_dft_codebook(m_t_, m_, config.b, config.codebook_trials, seed));
      }
      break;
    case TpcMode::polar:
    case TpcMode::polar_qopt:
      if (!given.empty()) {
        check_book(given.at(0), m_t_, m_, config.b1);
        books_.push_back(given[0]);
      } else {
        books_.push_back(build_w_codebook(m_t_, m_, config.b1, config.codebook_trials, seed));
      }
      if (mode_ == TpcMode::polar) {
        if (given.size() >= 2) {
          check_book(given[1], m_, m_, config.b2);
          books_.push_back(given[1]);
        } else {
          books_.push_back(build_q_codebook(m_, config.b2));
        }
      }
      break;
    case TpcMode::none:
    case TpcMode::f_opt:
      break;
  }
}

PrecoderSelector::Choice PrecoderSelector::select(const ComplexMatrix& h, double es_over_n0) const {
  Choice out;
  switch (mode_) {
    case TpcMode::none:
      out.f = antenna_subset(m_t_, m_);
      out.capacity = logdet_capacity(h * out.f, es_over_n0, m_);
      break;
    case TpcMode::dft: {
      const CapacitySelection sel = select_capacity(h, books_[0], es_over_n0, m_);
      out.f = books_[0].matrices[sel.index];
      out.capacity = sel.capacity;
      out.cost = sel.cost;
      break;
    }
    case TpcMode::polar: {
      PolarSelection sel = select_polar(h, books_[0], books_[1], es_over_n0, m_);
      out.f = std::move(sel.precoder);
      out.capacity = sel.capacity;
      out.cost = sel.cost;
      break;
    }
    case TpcMode::polar_qopt: {
      const CapacitySelection sel = select_capacity(h, books_[0], es_over_n0, m_);
      const ComplexMatrix& w = books_[0].matrices[sel.index];
      out.f = w * optimal_q(h, w);
      out.capacity = sel.capacity;
      out.cost = sel.cost;
      break;
    }
    case TpcMode::f_opt:
      out.f = optimal_f(h, m_);
      out.capacity = logdet_capacity(h * out.f, es_over_n0, m_);
      break;
  }
  return out;
}

// ---- Transmit / receive ---------------------------------------------------------

ComplexMatrix encode_frame(std::span<const std::uint8_t> payload, const PolarSpec& spec) {
  if (static_cast<int>(payload.size()) != spec.payload_bits) throw ContractViolation("encode_frame: payload length");
  const int slots = spec.code_len / 2;
  ComplexMatrix s(spec.streams, slots);
  std::size_t cursor = 0;
  for (int i = 0; i < spec.streams; ++i) {
    const auto chunk = payload.subspan(cursor, spec.payload_size(i));
    cursor += chunk.size();
    const Bits info = crc_attach(chunk, spec.crc);
    const auto symbols = map_codeword(polar_encode(info, spec, i));
    for (int t = 0; t < slots; ++t) s(i, t) = symbols[t];
  }
  return s;
}

SicReceiver::SicReceiver(const PolarSpec& spec, DecoderKind decoder)
    : spec_(spec),
      decoder_(decoder),
      sc_(spec.code_len),
      scl_(spec.code_len, decoder == DecoderKind::cascl ? spec.list_size : 1),
      llrs_(spec.code_len) {}

void SicReceiver::set_code(const PolarSpec& spec) {
  if (spec.code_len != spec_.code_len || spec.streams != spec_.streams || spec.list_size != spec_.list_size)
    throw ContractViolation("set_code: code shape differs from the receiver's");
  spec_ = spec;
}

ReceivedFrame SicReceiver::receive(const ComplexMatrix& y, const ComplexMatrix& g, double es, double n0,
                                   const ComplexMatrix* genie_symbols) {
  const int streams = spec_.streams;
  if (g.cols() != streams || y.rows() != g.rows() || y.cols() != spec_.code_len / 2)
    throw ContractViolation("receive: dimension mismatch");
  const double amp = std::sqrt(es / static_cast<double>(streams));

  ReceivedFrame out;
  out.info.resize(streams);
  out.crc_ok.assign(streams, 1);
  ComplexMatrix residual = y;
  for (int i = 0; i < streams; ++i) {
    const MlsicDemapper demapper(g.rightCols(streams - i), es, n0, streams);
    demapper.demap(residual, llrs_);
    if (decoder_ == DecoderKind::sc) {
      out.info[i] = sc_.decode(llrs_, spec_.frozen[i]);
    } else {
      ListDecodeResult r = scl_.decode(llrs_, spec_.frozen[i], spec_.crc);
      out.info[i] = std::move(r.info);
      out.crc_ok[i] = r.crc_ok ? 1 : 0;
    }
    if (i + 1 == streams) break;

    Eigen::RowVectorXcd symbols(spec_.code_len / 2);
    if (genie_symbols) {
      symbols = genie_symbols->row(i);
    } else {
      const auto mapped = remap_stream(out.info[i], spec_, i);
      for (std::size_t t = 0; t < mapped.size(); ++t) symbols[t] = mapped[t];
    }
    residual.noalias() -= (amp * g.col(i)) * symbols;
  }
  return out;
}

ReceivedFrame receive_frame(const ComplexMatrix& y, const ComplexMatrix& h, const ComplexMatrix& f,
                            const PolarSpec& spec, double es, double n0, DecoderKind decoder) {
  SicReceiver rx(spec, decoder);
  return rx.receive(y, h * f, es, n0);
}

ReliabilityProfile ga_profile_from_capacities(const std::vector<double>& capacities, int code_len) {
  ReliabilityProfile profile;
  for (double c : capacities) {
    const double snr = std::max(0.0, std::exp2(std::max(0.0, c)) - 1.0);
    profile.llr_means.push_back(ga_evolve(2.0 * snr, code_len));
  }
  return profile;
}

ReliabilityProfile ga_profile_for(const ComplexMatrix& h, const ComplexMatrix& f, double es_over_n0, int code_len) {
  const SubstreamProfile sub = substream_capacities(h * f, es_over_n0, static_cast<int>(f.cols()));
  return ga_profile_from_capacities(sub.capacities, code_len);
}

PolarSpec build_code(const SystemConfig& config, const std::vector<double>& capacities) {
  const CrcPolynomial crc = crc_for(config);
  const int k = payload_bits(config);
  const ReliabilityProfile profile = ga_profile_from_capacities(capacities, 2 * config.n);
  return make_polar_spec(2 * config.n, config.m, k, select_info_sets(profile, k + config.m * crc.length, crc.length),
                         crc, config.decoder == DecoderKind::cascl ? config.list_size : 1);
}

// ---- Monte Carlo --------------------------------------------------------------------

namespace {

struct BlockTally {
  long frames = 0;
  long block_errors = 0;
  long bit_errors = 0;
  double capacity = 0.0;
  double polarization = 0.0;
};

struct Construction {
  PolarSpec spec;
  double ga_bound = 0.0;
  // Fixed channel only.
  std::optional<PrecoderSelector::Choice> fixed_choice;
  SubstreamProfile fixed_profile;
};

Construction construct(const SystemConfig& config, const PrecoderSelector& selector, const ComplexMatrix& h_fixed,
                       std::size_t snr_index) {
  const double rho = es_over_n0_of(config.snr_db[snr_index]);
  const int code_len = 2 * config.n;

  Construction out;
  if (config.channel == ChannelMode::fixed_reference) {
    auto choice = selector.select(h_fixed, rho);
    out.fixed_profile = substream_capacities(h_fixed * choice.f, rho, config.m);
    out.spec = build_code(config, out.fixed_profile.capacities);
    out.ga_bound =
        ga_block_error_bound(ga_profile_from_capacities(out.fixed_profile.capacities, code_len), out.spec.info_sets);
    out.fixed_choice = std::move(choice);
    return out;
  }

  std::vector<std::vector<double>> draws;
  std::vector<double> mean(config.m, 0.0);
  for (int d = 0; d < config.construction_draws; ++d) {
    Rng rng(derive_seed(config.master_seed, {kTagConstruct, snr_index, static_cast<std::uint64_t>(d)}));
    const ComplexMatrix h = draw_channel(config.m_r, config.m_t, rng);
    const auto choice = selector.select(h, rho);
    auto caps = substream_capacities(h * choice.f, rho, config.m).capacities;
    for (int i = 0; i < config.m; ++i) mean[i] += caps[i];
    draws.push_back(std::move(caps));
  }
  for (double& v : mean) v /= config.construction_draws;
  // Per-frame runs still need a code of the right shape for the receivers.
  out.spec = build_code(config, mean);

  double bound = 0.0;
  for (const auto& caps : draws) {
    const ReliabilityProfile profile = ga_profile_from_capacities(caps, code_len);
    const PolarSpec& code =
        config.construction == ConstructionMode::per_frame ? build_code(config, caps) : out.spec;
    bound += ga_block_error_bound(profile, code.info_sets);
  }
  out.ga_bound = bound / config.construction_draws;
  return out;
}

BlockTally simulate_block(const SystemConfig& config, const PrecoderSelector& selector, const Construction& cons,
                          const ComplexMatrix& h_fixed, std::size_t snr_index, long first, long last,
                          SicReceiver& rx) {
  const double es = es_over_n0_of(config.snr_db[snr_index]);
  const double n0 = 1.0;
  const bool per_frame = config.channel == ChannelMode::fading && config.construction == ConstructionMode::per_frame;
  PolarSpec frame_code;
  BlockTally tally;
  Bits payload(cons.spec.payload_bits);
  for (long frame = first; frame < last; ++frame) {
    Rng rng(derive_seed(config.master_seed, {kTagFrame, snr_index, static_cast<std::uint64_t>(frame)}));
    ComplexMatrix h;
    PrecoderSelector::Choice choice;
    double polarization = 0.0;
    if (config.channel == ChannelMode::fading) {
      h = draw_channel(config.m_r, config.m_t, rng);
      choice = selector.select(h, es);
      const SubstreamProfile sub = substream_capacities(h * choice.f, es, config.m);
      polarization = sub.polarization;
      if (per_frame) {
        frame_code = build_code(config, sub.capacities);
        rx.set_code(frame_code);
      }
    } else {
      h = h_fixed;
      choice = *cons.fixed_choice;
      polarization = cons.fixed_profile.polarization;
    }
    for (auto& bit : payload) bit = static_cast<std::uint8_t>(rng() >> 63);

    const PolarSpec& spec = per_frame ? frame_code : cons.spec;
    const ComplexMatrix s = encode_frame(payload, spec);
    const ComplexMatrix y = transmit(h, choice.f, s, es, n0, rng);
    const ReceivedFrame got = rx.receive(y, h * choice.f, es, n0);

    long errors = 0;
    std::size_t cursor = 0;
    for (int i = 0; i < spec.streams; ++i) {
      const int len = spec.payload_size(i);
      for (int j = 0; j < len; ++j) errors += (got.info[i][j] != payload[cursor + j]) ? 1 : 0;
      cursor += len;
    }
    ++tally.frames;
    tally.bit_errors += errors;
    tally.block_errors += errors > 0 ? 1 : 0;
    tally.capacity += choice.capacity;
    tally.polarization += polarization;
  }
  return tally;
}

template <typename Work>
void parallel_blocks(long blocks, int workers, Work&& work) {
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&](int worker) {
    try {
      for (long b = next++; b < blocks; b = next++) work(worker, b);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };
  if (workers <= 1) {
    loop(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop, w);
  }
  if (failure) std::rethrow_exception(failure);
}

int resolve_workers(const SystemConfig& config) {
  if (config.workers > 0) return config.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

SimResult run_bler(const SystemConfig& config) {
  validate(config);
  const PrecoderSelector selector(config);
  const ComplexMatrix h_fixed = fixed_reference_channel();

  SimResult result;
  result.config = config;
  for (const auto& book : selector.codebooks()) result.codebook_digests.push_back(codebook_digest(book));
  if (config.channel == ChannelMode::fixed_reference)
    result.construction = "GA at each SNR point from the substream capacities of the fixed channel";
  else if (config.construction == ConstructionMode::per_frame)
    result.construction = "GA per frame from that frame's substream capacities; GA bound averaged over " +
                          std::to_string(config.construction_draws) + " channel draws";
  else
    result.construction = "GA at each SNR point from substream capacities averaged over " +
                          std::to_string(config.construction_draws) + " channel draws";
  const bool per_frame = config.channel == ChannelMode::fading && config.construction == ConstructionMode::per_frame;

  const int workers = resolve_workers(config);
  for (std::size_t si = 0; si < config.snr_db.size(); ++si) {
    const Construction cons = construct(config, selector, h_fixed, si);
    const long blocks = (config.frames + kFramesPerBlock - 1) / kFramesPerBlock;
    std::vector<BlockTally> tallies(blocks);
    std::vector<std::unique_ptr<SicReceiver>> receivers(workers);
    parallel_blocks(blocks, workers, [&](int worker, long b) {
      if (!receivers[worker]) receivers[worker] = std::make_unique<SicReceiver>(cons.spec, config.decoder);
      const long first = b * kFramesPerBlock;
      const long last = std::min(config.frames, first + kFramesPerBlock);
      tallies[b] = simulate_block(config, selector, cons, h_fixed, si, first, last, *receivers[worker]);
    });

    SnrRecord rec;
    rec.snr_db = config.snr_db[si];
    rec.ga_bound = cons.ga_bound;
    double capacity = 0.0, polarization = 0.0;
    for (const auto& t : tallies) {
      rec.frames += t.frames;
      rec.block_errors += t.block_errors;
      rec.bit_errors += t.bit_errors;
      capacity += t.capacity;
      polarization += t.polarization;
    }
    if (rec.frames > 0) {
      rec.bler = static_cast<double>(rec.block_errors) / rec.frames;
      rec.ber = static_cast<double>(rec.bit_errors) / (static_cast<double>(rec.frames) * cons.spec.payload_bits);
      rec.capacity_mean = capacity / rec.frames;
      rec.polarization_mean = polarization / rec.frames;
    } else if (cons.fixed_choice) {
      rec.capacity_mean = cons.fixed_choice->capacity;
      rec.polarization_mean = cons.fixed_profile.polarization;
    }
    result.records.push_back(rec);
    if (!per_frame) result.codes.push_back(cons.spec);
  }
  return result;
}

std::vector<CapacityProfileRow> run_capacity_profile(const SystemConfig& config, const std::vector<TpcMode>& modes) {
  std::vector<CapacityProfileRow> rows;
  const ComplexMatrix h_fixed = fixed_reference_channel();
  for (TpcMode mode : modes) {
    SystemConfig c = config;
    c.tpc = mode;
    validate(c);
    const PrecoderSelector selector(c);
    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
      const double rho = es_over_n0_of(c.snr_db[si]);
      CapacityProfileRow row;
      row.snr_db = c.snr_db[si];
      row.mode = mode;
      if (c.channel == ChannelMode::fixed_reference) {
        row.profile = substream_capacities(h_fixed * selector.select(h_fixed, rho).f, rho, c.m);
      } else {
        const long draws = std::max<long>(1, c.frames);
        std::vector<double> mean(c.m, 0.0);
        for (long d = 0; d < draws; ++d) {
          Rng rng(derive_seed(c.master_seed, {kTagProfile, si, static_cast<std::uint64_t>(d)}));
          const ComplexMatrix h = draw_channel(c.m_r, c.m_t, rng);
          const auto caps = substream_capacities(h * selector.select(h, rho).f, rho, c.m).capacities;
          for (int i = 0; i < c.m; ++i) mean[i] += caps[i];
        }
        for (double& v : mean) v /= static_cast<double>(draws);
        row.profile.capacities = mean;
        row.profile.mean = row.profile.total() / c.m;
        for (double v : mean) row.profile.polarization += (v - row.profile.mean) * (v - row.profile.mean);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string bler_csv(const SimResult& result) {
  std::ostringstream os;
  os << "snr_db,frames,block_errs,bler,ber,ga_bound,capacity_mean,polarization_mean\n";
  for (const auto& r : result.records) {
    os << format_number(r.snr_db) << ',' << r.frames << ',' << r.block_errors << ','
       << (r.bler ? format_number(*r.bler) : "") << ',' << (r.ber ? format_number(*r.ber) : "") << ','
       << format_number(r.ga_bound) << ',' << format_number(r.capacity_mean) << ','
       << format_number(r.polarization_mean) << '\n';
  }
  return os.str();
}

std::string capacity_profile_csv(const std::vector<CapacityProfileRow>& rows) {
  std::size_t streams = 0;
  for (const auto& r : rows) streams = std::max(streams, r.profile.capacities.size());
  std::ostringstream os;
  os << "snr_db,tpc";
  for (std::size_t i = 0; i < streams; ++i) os << ",I_" << (i + 1);
  os << ",total,mean,polarization\n";
  for (const auto& r : rows) {
    os << format_number(r.snr_db) << ',' << to_string(r.mode);
    for (std::size_t i = 0; i < streams; ++i)
      os << ',' << (i < r.profile.capacities.size() ? format_number(r.profile.capacities[i]) : "");
    os << ',' << format_number(r.profile.total()) << ',' << format_number(r.profile.mean) << ','
       << format_number(r.profile.polarization) << '\n';
  }
  return os.str();
}

std::string result_metadata_json(const SimResult& result) {
  const SystemConfig& c = result.config;
  nlohmann::json j;
  j["mt"] = c.m_t;
  j["mr"] = c.m_r;
  j["streams"] = c.m;
  j["slots"] = c.n;
  j["rate"] = c.rate;
  j["payload_bits"] = payload_bits(c);
  j["snr_db"] = c.snr_db;
  j["tpc"] = std::string(to_string(c.tpc));
  j["b"] = c.b;
  j["b1"] = c.b1;
  j["b2"] = c.b2;
  j["decoder"] = std::string(to_string(c.decoder));
  j["list_size"] = c.list_size;
  j["crc_len"] = c.crc_len;
  j["frames"] = c.frames;
  j["master_seed"] = c.master_seed;
  j["channel"] = std::string(to_string(c.channel));
  j["construction_mode"] = std::string(to_string(c.construction));
  j["codebook_trials"] = c.codebook_trials;
  j["codebook_seed"] = c.codebook_seed.value_or(derive_seed(c.master_seed, {kTagCodebook}));
  j["codebook_digests"] = result.codebook_digests;
  j["construction"] = result.construction;
  return j.dump(2) + "\n";
}

}  // namespace polarprec
