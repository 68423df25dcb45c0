#include "polarprec/polar_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "polarprec/kernels.hpp"
#include "polarprec/numerics.hpp"

namespace polarprec {

namespace {

bool is_power_of_two(int n) { return n >= 1 && std::has_single_bit(static_cast<unsigned>(n)); }

int log2_exact(int n) { return std::countr_zero(static_cast<unsigned>(n)); }

constexpr double kPhiSplit = 10.0;
constexpr double kPhiA = 0.4527;
constexpr double kPhiB = 0.86;
constexpr double kPhiC = 0.0218;

double log_phi_lower(double x) { return -kPhiA * std::pow(x, kPhiB) + kPhiC; }

double log_phi_upper(double x) {
  return 0.5 * std::log(std::numbers::pi / x) - 0.25 * x + std::log1p(-10.0 / (7.0 * x));
}

double d_log_phi_upper(double x) {
  const double t = 10.0 / (7.0 * x);
  return -0.5 / x - 0.25 + (t / x) / (1.0 - t);
}

// ln phi just below the branch switch; the upper branch is capped here.
const double kLogPhiAtSplit = log_phi_lower(kPhiSplit);

// The lower branch exceeds 1 below x ~ 0.03, so on [0, kPhiJoin] phi is the
// chord from (0, 1) to the lower branch instead.
constexpr double kPhiJoin = 0.1;
const double kLogPhiAtJoin = log_phi_lower(kPhiJoin);
const double kPhiChordSlope = -std::expm1(kLogPhiAtJoin) / kPhiJoin;

// ln(1 + e^{-x}) without overflow.
double softplus_neg(double x) { return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

}  // namespace

PolarSpec make_polar_spec(int code_len, int streams, int payload_bits, std::vector<std::vector<int>> info_sets,
                          CrcPolynomial crc, int list_size) {
  if (!is_power_of_two(code_len) || code_len < 2)
    throw ContractViolation("polar spec: code length must be a power of two >= 2");
  if (streams < 1) throw ContractViolation("polar spec: need at least one stream");
  if (payload_bits < 0) throw ContractViolation("polar spec: negative payload");
  if (list_size < 1) throw ContractViolation("polar spec: list size must be >= 1");
  if (crc.length < 0 || crc.length > 31) throw ContractViolation("polar spec: unsupported CRC length");
  if (crc.length > 0 && (crc.poly >> crc.length) != 1u)
    throw ContractViolation("polar spec: CRC polynomial degree does not match its length");
  if (static_cast<int>(info_sets.size()) != streams)
    throw ContractViolation("polar spec: one information set per stream required");

  PolarSpec spec;
  spec.code_len = code_len;
  spec.streams = streams;
  spec.payload_bits = payload_bits;
  spec.crc = crc;
  spec.list_size = list_size;

  long total = 0;
  for (auto& set : info_sets) {
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw ContractViolation("polar spec: duplicate information index");
    if (!set.empty() && (set.front() < 0 || set.back() >= code_len))
      throw ContractViolation("polar spec: information index out of range");
    if (crc.length > 0 && static_cast<int>(set.size()) < crc.length)
      throw ContractViolation("polar spec: a stream cannot hold its CRC");
    total += static_cast<long>(set.size());
    std::vector<std::uint8_t> mask(code_len, 1);
    for (int idx : set) mask[idx] = 0;
    spec.frozen.push_back(std::move(mask));
  }
  if (total != static_cast<long>(payload_bits) + static_cast<long>(streams) * crc.length)
    throw ContractViolation("polar spec: information sets do not add up to K + M * crc_len");
  spec.info_sets = std::move(info_sets);
  return spec;
}

// ---- Gaussian approximation -------------------------------------------------

double ga_log_phi(double x) {
  if (x <= 0.0) return 0.0;
  if (x < kPhiJoin) return std::log1p(-kPhiChordSlope * x);
  if (x < kPhiSplit) return log_phi_lower(x);
  return std::min(kLogPhiAtSplit, log_phi_upper(x));
}

double ga_phi(double x) { return std::exp(ga_log_phi(x)); }

double ga_phi_inverse_log(double log_y) {
  if (log_y >= 0.0) return 0.0;
  if (log_y >= kLogPhiAtJoin) return std::min(-std::expm1(log_y) / kPhiChordSlope, kPhiJoin);
  if (log_y >= kLogPhiAtSplit) {
    // Closed-form inverse of the lower branch; also returns the split point
    // for the flat segment.
    const double x = std::pow((kPhiC - log_y) / kPhiA, 1.0 / kPhiB);
    return std::clamp(x, kPhiJoin, kPhiSplit);
  }
  if (log_y <= log_phi_upper(limits::ga_mean_cap)) return limits::ga_mean_cap;

  // Upper branch is strictly decreasing on [10, cap]: bracketed Newton.
  double lo = kPhiSplit;
  double hi = limits::ga_mean_cap;
  double x = std::clamp(-4.0 * log_y, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = log_phi_upper(x) - log_y;
    if (g > 0.0)
      lo = x;
    else
      hi = x;
    double next = x - g / d_log_phi_upper(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-9 || hi - lo <= 1e-9) return next;
    x = next;
  }
  return x;
}

double ga_phi_inverse(double y) {
  if (y <= 0.0) return limits::ga_mean_cap;
  return ga_phi_inverse_log(std::log(y));
}

double ga_check_node(double m) {
  if (m <= 0.0) return 0.0;
  // on the chord 1 - phi = s m, so the output 1 - (s m)^2 is again on it
  if (m < kPhiJoin) return kPhiChordSlope * m * m;
  // 1 - (1 - phi)^2 = phi (2 - phi)
  const double log_phi = ga_log_phi(m);
  const double phi = std::exp(log_phi);
  return ga_phi_inverse_log(log_phi + std::log(2.0 - phi));
}

namespace {
void ga_fill(double mean, std::span<double> out) {
  if (out.size() == 1) {
    out[0] = mean;
    return;
  }
  const std::size_t half = out.size() / 2;
  ga_fill(ga_check_node(mean), out.first(half));
  ga_fill(std::min(2.0 * mean, limits::ga_mean_cap), out.subspan(half));
}
}  // namespace

std::vector<double> ga_evolve(double initial_llr_mean, int code_len) {
  if (!is_power_of_two(code_len)) throw ContractViolation("ga_evolve: length must be a power of two");
  if (initial_llr_mean < 0.0 || !std::isfinite(initial_llr_mean))
    throw ContractViolation("ga_evolve: initial mean must be finite and non-negative");
  std::vector<double> out(code_len);
  ga_fill(std::min(initial_llr_mean, limits::ga_mean_cap), out);
  return out;
}

std::vector<std::vector<int>> select_info_sets(const ReliabilityProfile& profile, int count, int min_per_stream) {
  struct Channel {
    double mean;
    int stream;
    int index;
  };
  const int streams = static_cast<int>(profile.llr_means.size());
  std::vector<Channel> all;
  for (int s = 0; s < streams; ++s) {
    if (min_per_stream > static_cast<int>(profile.llr_means[s].size()))
      throw ContractViolation("select_info_sets: stream shorter than its reserved channels");
    for (int i = 0; i < static_cast<int>(profile.llr_means[s].size()); ++i)
      all.push_back({profile.llr_means[s][i], s, i});
  }
  if (count < 0 || count > static_cast<int>(all.size()))
    throw ContractViolation("select_info_sets: request exceeds available channels");
  if (min_per_stream < 0 || static_cast<long>(min_per_stream) * streams > count)
    throw ContractViolation("select_info_sets: reservations exceed the request");

  std::stable_sort(all.begin(), all.end(), [](const Channel& a, const Channel& b) { return a.mean > b.mean; });
  std::vector<std::vector<int>> sets(streams);
  std::vector<std::uint8_t> taken(all.size(), 0);
  int chosen = 0;
  if (min_per_stream > 0) {
    std::vector<int> got(streams, 0);
    for (std::size_t j = 0; j < all.size(); ++j)
      if (got[all[j].stream] < min_per_stream) {
        ++got[all[j].stream];
        taken[j] = 1;
        sets[all[j].stream].push_back(all[j].index);
        ++chosen;
      }
  }
  for (std::size_t j = 0; j < all.size() && chosen < count; ++j)
    if (!taken[j]) {
      sets[all[j].stream].push_back(all[j].index);
      ++chosen;
    }
  for (auto& set : sets) std::sort(set.begin(), set.end());
  return sets;
}

double ga_block_error_bound(const ReliabilityProfile& profile, const std::vector<std::vector<int>>& info_sets) {
  double log_success = 0.0;
  for (std::size_t s = 0; s < info_sets.size(); ++s) {
    for (int idx : info_sets[s]) {
      const double m = std::max(0.0, profile.llr_means.at(s).at(idx));
      const double q = 0.5 * std::erfc(std::sqrt(m / 2.0) / std::sqrt(2.0));
      log_success += std::log1p(-q);
    }
  }
  return std::clamp(-std::expm1(log_success), 0.0, 1.0);
}

// ---- Encoding and CRC -------------------------------------------------------

void polar_transform(std::span<std::uint8_t> bits) {
  const std::size_t n = bits.size();
  if (!is_power_of_two(static_cast<int>(n))) throw ContractViolation("polar_transform: length must be 2^n");
  // Butterfly: x_first ^= x_second at every stage.
  for (std::size_t half = 1; half < n; half <<= 1)
    for (std::size_t block = 0; block < n; block += 2 * half)
      for (std::size_t j = block; j < block + half; ++j) bits[j] ^= bits[j + half];
}

Bits polar_encode(std::span<const std::uint8_t> info_bits, const PolarSpec& spec, int stream) {
  const auto& set = spec.info_sets.at(stream);
  if (info_bits.size() != set.size()) throw ContractViolation("polar_encode: info length does not match set");
  Bits u(spec.code_len, 0);
  for (std::size_t k = 0; k < set.size(); ++k) u[set[k]] = info_bits[k] & 1u;
  polar_transform(u);
  return u;
}

Bits crc_remainder(std::span<const std::uint8_t> bits, CrcPolynomial crc) {
  Bits rem(crc.length, 0);
  if (crc.length == 0) return rem;
  const std::uint32_t top = 1u << (crc.length - 1);
  const std::uint32_t mask = (1u << crc.length) - 1u;
  const std::uint32_t taps = crc.poly & mask;
  std::uint32_t reg = 0;
  for (std::uint8_t b : bits) {
    const bool feedback = ((reg & top) != 0) != ((b & 1u) != 0);
    reg = (reg << 1) & mask;
    if (feedback) reg ^= taps;
  }
  for (int k = 0; k < crc.length; ++k) rem[k] = (reg >> (crc.length - 1 - k)) & 1u;
  return rem;
}

Bits crc_attach(std::span<const std::uint8_t> bits, CrcPolynomial crc) {
  Bits out(bits.begin(), bits.end());
  const Bits rem = crc_remainder(bits, crc);
  out.insert(out.end(), rem.begin(), rem.end());
  return out;
}

bool crc_check(std::span<const std::uint8_t> bits_with_crc, CrcPolynomial crc) {
  if (static_cast<int>(bits_with_crc.size()) < crc.length) return false;
  const auto split = bits_with_crc.size() - crc.length;
  const Bits rem = crc_remainder(bits_with_crc.first(split), crc);
  return std::equal(rem.begin(), rem.end(), bits_with_crc.begin() + split);
}

// ---- SC ---------------------------------------------------------------------

ScDecoder::ScDecoder(int code_len)
    : code_len_(code_len),
      levels_(is_power_of_two(code_len) ? log2_exact(code_len) : -1),
      scratch_(code_len),
      codeword_(code_len),
      u_(code_len) {
  if (levels_ < 1) throw ContractViolation("ScDecoder: code length must be 2^n, n >= 1");
}

void ScDecoder::node(int level, const double* in, std::uint8_t* bits) {
  if (level == 0) {
    const std::uint8_t bit = frozen_[leaf_] ? 0 : (in[0] < 0.0 ? 1 : 0);
    bits[0] = bit;
    u_[leaf_++] = bit;
    return;
  }
  const auto& k = kernels::active();
  const std::size_t half = std::size_t{1} << (level - 1);
  double* out = scratch_.data() + half - 1;
  std::span<const double> lhs(in, half), rhs(in + half, half);
  k.check_node(lhs, rhs, {out, half});
  node(level - 1, out, bits);
  k.bit_node(lhs, rhs, {bits, half}, {out, half});
  node(level - 1, out, bits + half);
  k.xor_into({bits, half}, {bits + half, half});
}

Bits ScDecoder::decode(std::span<const double> llrs, std::span<const std::uint8_t> frozen) {
  if (static_cast<int>(llrs.size()) != code_len_ || static_cast<int>(frozen.size()) != code_len_)
    throw ContractViolation("sc_decode: length mismatch");
  frozen_ = frozen;
  leaf_ = 0;
  node(levels_, llrs.data(), codeword_.data());
  Bits info;
  for (int i = 0; i < code_len_; ++i)
    if (!frozen[i]) info.push_back(u_[i]);
  return info;
}

// ---- SCL --------------------------------------------------------------------

ScListDecoder::ScListDecoder(int code_len, int list_size)
    : code_len_(code_len),
      levels_(is_power_of_two(code_len) ? log2_exact(code_len) : -1),
      list_size_(list_size),
      scratch_(static_cast<std::size_t>(code_len) * list_size),
      codeword_(static_cast<std::size_t>(code_len) * list_size),
      u_(static_cast<std::size_t>(code_len) * list_size),
      metric_(list_size),
      active_(list_size) {
  if (levels_ < 1) throw ContractViolation("ScListDecoder: code length must be 2^n, n >= 1");
  if (list_size < 1) throw ContractViolation("ScListDecoder: list size must be >= 1");
}

void ScListDecoder::clone(int from, int to) {
  std::copy_n(scratch_.data() + from * code_len_, code_len_, scratch_.data() + to * code_len_);
  std::copy_n(codeword(from), code_len_, codeword(to));
  std::copy_n(u(from), code_len_, u(to));
  metric_[to] = metric_[from];
  active_[to] = 1;
}

void ScListDecoder::node(int level, int offset) {
  if (level == 0) {
    leaf(offset);
    return;
  }
  const auto& k = kernels::active();
  const std::size_t half = std::size_t{1} << (level - 1);
  auto input = [&](int p) { return level == levels_ ? channel_.data() : scratch(p, level); };

  for (int p = 0; p < list_size_; ++p) {
    if (!active_[p]) continue;
    const double* in = input(p);
    k.check_node({in, half}, {in + half, half}, {scratch(p, level - 1), half});
  }
  node(level - 1, offset);
  for (int p = 0; p < list_size_; ++p) {
    if (!active_[p]) continue;
    const double* in = input(p);
    k.bit_node({in, half}, {in + half, half}, {codeword(p) + offset, half}, {scratch(p, level - 1), half});
  }
  node(level - 1, offset + static_cast<int>(half));
  for (int p = 0; p < list_size_; ++p) {
    if (!active_[p]) continue;
    k.xor_into({codeword(p) + offset, half}, {codeword(p) + offset + half, half});
  }
}

void ScListDecoder::leaf(int index) {
  if (frozen_[index]) {
    for (int p = 0; p < list_size_; ++p) {
      if (!active_[p]) continue;
      metric_[p] += softplus_neg(scratch(p, 0)[0]);
      codeword(p)[index] = 0;
      u(p)[index] = 0;
    }
    return;
  }

  struct Candidate {
    double metric;
    int path;
    std::uint8_t bit;
  };
  std::vector<Candidate> cand;
  cand.reserve(2 * list_size_);
  for (int p = 0; p < list_size_; ++p) {
    if (!active_[p]) continue;
    const double llr = scratch(p, 0)[0];
    cand.push_back({metric_[p] + softplus_neg(llr), p, 0});
    cand.push_back({metric_[p] + softplus_neg(-llr), p, 1});
  }
  const std::size_t keep = std::min<std::size_t>(list_size_, cand.size());
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.metric < b.metric; });

  // survivors[p] bit 0 / bit 1 flags
  std::vector<std::uint8_t> keep0(list_size_, 0), keep1(list_size_, 0);
  std::vector<double> m0(list_size_), m1(list_size_);
  for (std::size_t c = 0; c < keep; ++c) {
    if (cand[c].bit == 0) {
      keep0[cand[c].path] = 1;
      m0[cand[c].path] = cand[c].metric;
    } else {
      keep1[cand[c].path] = 1;
      m1[cand[c].path] = cand[c].metric;
    }
  }
  std::vector<int> free_slots, survivors;
  for (int p = 0; p < list_size_; ++p) {
    if (active_[p] && (keep0[p] || keep1[p]))
      survivors.push_back(p);
    else {
      active_[p] = 0;
      free_slots.push_back(p);
    }
  }
  std::size_t next_free = 0;
  for (int p : survivors) {
    if (keep0[p] && keep1[p]) {
      const int q = free_slots.at(next_free++);
      clone(p, q);
      metric_[q] = m1[p];
      codeword(q)[index] = 1;
      u(q)[index] = 1;
      metric_[p] = m0[p];
      codeword(p)[index] = 0;
      u(p)[index] = 0;
    } else {
      const std::uint8_t bit = keep1[p] ? 1 : 0;
      metric_[p] = bit ? m1[p] : m0[p];
      codeword(p)[index] = bit;
      u(p)[index] = bit;
    }
  }
}

ListDecodeResult ScListDecoder::decode(std::span<const double> llrs, std::span<const std::uint8_t> frozen,
                                       CrcPolynomial crc) {
  if (static_cast<int>(llrs.size()) != code_len_ || static_cast<int>(frozen.size()) != code_len_)
    throw ContractViolation("ca_scl_decode: length mismatch");
  channel_ = llrs;
  frozen_ = frozen;
  std::fill(active_.begin(), active_.end(), 0);
  std::fill(metric_.begin(), metric_.end(), 0.0);
  active_[0] = 1;
  node(levels_, 0);

  order_.clear();
  for (int p = 0; p < list_size_; ++p)
    if (active_[p]) order_.push_back(p);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return metric_[a] < metric_[b]; });

  auto extract = [&](int p) {
    Bits info;
    for (int i = 0; i < code_len_; ++i)
      if (!frozen[i]) info.push_back(u(p)[i]);
    return info;
  };
  if (crc.length == 0) return {extract(order_.front()), true};
  for (int p : order_) {
    Bits info = extract(p);
    if (crc_check(info, crc)) return {std::move(info), true};
  }
  return {extract(order_.front()), false};
}

Bits sc_decode(std::span<const double> llrs, const PolarSpec& spec, int stream) {
  ScDecoder dec(spec.code_len);
  return dec.decode(llrs, spec.frozen.at(stream));
}

ListDecodeResult ca_scl_decode(std::span<const double> llrs, const PolarSpec& spec, int stream) {
  ScListDecoder dec(spec.code_len, spec.list_size);
  return dec.decode(llrs, spec.frozen.at(stream), spec.crc);
}

// ---- Construction files -----------------------------------------------------

std::string format_info_sets(const PolarSpec& spec) {
  std::ostringstream os;
  os << "polarprec-infoset code_len=" << spec.code_len << " streams=" << spec.streams
     << " payload_bits=" << spec.payload_bits << " crc_len=" << spec.crc.length << " crc_poly=0x" << std::hex
     << spec.crc.poly << std::dec << " list_size=" << spec.list_size << '\n';
  for (const auto& set : spec.info_sets) {
    for (std::size_t k = 0; k < set.size(); ++k) os << (k ? " " : "") << set[k];
    os << '\n';
  }
  return os.str();
}

PolarSpec parse_info_sets(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header)) throw ContractViolation("info set file: empty");
  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  if (magic != "polarprec-infoset") throw ContractViolation("info set file: bad magic");

  int code_len = -1, streams = -1, payload = -1, crc_len = 0, list_size = 1;
  std::uint32_t poly = 0;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ContractViolation("info set file: malformed header field " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "code_len")
      code_len = std::stoi(value);
    else if (key == "streams")
      streams = std::stoi(value);
    else if (key == "payload_bits")
      payload = std::stoi(value);
    else if (key == "crc_len")
      crc_len = std::stoi(value);
    else if (key == "crc_poly")
      poly = static_cast<std::uint32_t>(std::stoul(value, nullptr, 16));
    else if (key == "list_size")
      list_size = std::stoi(value);
    else
      throw ContractViolation("info set file: unknown header field " + key);
  }
  if (code_len < 0 || streams < 0 || payload < 0) throw ContractViolation("info set file: incomplete header");

  std::vector<std::vector<int>> sets;
  std::string line;
  while (static_cast<int>(sets.size()) < streams && std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<int> set;
    int idx;
    while (ls >> idx) set.push_back(idx);
    sets.push_back(std::move(set));
  }
  if (static_cast<int>(sets.size()) != streams) throw ContractViolation("info set file: missing stream lines");
  return make_polar_spec(code_len, streams, payload, std::move(sets), {crc_len, poly}, list_size);
}

void write_info_sets(const std::filesystem::path& path, const PolarSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << format_info_sets(spec);
}

PolarSpec read_info_sets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_info_sets(buf.str());
}

}  // namespace polarprec
