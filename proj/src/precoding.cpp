#include "polarprec/precoding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace polarprec {

std::string_view to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::dft:
      return "DFT";
    case CodebookKind::w:
      return "W";
    case CodebookKind::q:
      return "Q";
  }
  return "?";
}

double SubstreamProfile::total() const { return std::accumulate(capacities.begin(), capacities.end(), 0.0); }

ComplexMatrix dft_base(int m_t, int m) {
  if (m < 1 || m > m_t) throw ContractViolation("dft_base: need 1 <= m <= m_t");
  ComplexMatrix f(m_t, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_t));
  for (int k = 0; k < m_t; ++k)
    for (int l = 0; l < m; ++l) {
      // reduce k*l mod m_t before the trig call so entries are exact roots of unity
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * l) % m_t) / m_t;
      f(k, l) = std::polar(scale, angle);
    }
  return f;
}

ComplexMatrix rotation_matrix(std::span<const int> exponents, int feedback_bits) {
  const long period = 1L << feedback_bits;
  ComplexMatrix theta = ComplexMatrix::Zero(static_cast<Eigen::Index>(exponents.size()),
                                            static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const long e = ((exponents[k] % period) + period) % period;
    theta(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(period));
  }
  return theta;
}

namespace {

// Theta^l as a diagonal with the exponent product reduced modulo 2^bits.
ComplexMatrix rotation_power(std::span<const int> exponents, int feedback_bits, long power) {
  const long period = 1L << feedback_bits;
  std::vector<int> reduced(exponents.size());
  for (std::size_t k = 0; k < exponents.size(); ++k)
    reduced[k] = static_cast<int>(((static_cast<long>(exponents[k]) * power) % period + period) % period);
  return rotation_matrix(reduced, feedback_bits);
}

Codebook orbit_codebook(CodebookKind kind, const ComplexMatrix& base, std::vector<int> exponents, int feedback_bits) {
  Codebook book;
  book.kind = kind;
  book.m_t = static_cast<int>(base.rows());
  book.m = static_cast<int>(base.cols());
  book.feedback_bits = feedback_bits;
  const long size = 1L << feedback_bits;
  for (long l = 0; l < size; ++l) {
    if (l == 0)
      book.matrices.push_back(base);
    else
      book.matrices.push_back(rotation_power(exponents, feedback_bits, l) * base);
  }
  book.rotation = std::move(exponents);
  return book;
}

void check_budget(int feedback_bits) {
  if (feedback_bits < 0 || feedback_bits > 16) throw ContractViolation("codebook: feedback bits must be in [0, 16]");
}

}  // namespace

double rotation_objective(const ComplexMatrix& base, std::span<const int> exponents, int feedback_bits) {
  check_budget(feedback_bits);
  if (static_cast<Eigen::Index>(exponents.size()) != base.rows())
    throw ContractViolation("rotation_objective: one exponent per row required");
  const long size = 1L << feedback_bits;
  if (size == 1) return 0.0;
  const ComplexMatrix projector = base * base.adjoint();
  double worst = std::numeric_limits<double>::infinity();
  for (long l = 1; l < size; ++l) {
    const ComplexMatrix theta = rotation_power(exponents, feedback_bits, l);
    const ComplexMatrix rotated = theta.diagonal().asDiagonal() * projector * theta.diagonal().conjugate().asDiagonal();
    worst = std::min(worst, (projector - rotated).norm() / std::sqrt(2.0));
  }
  return worst;
}

std::vector<int> train_rotation(const ComplexMatrix& base, int feedback_bits, long trials, Rng& rng) {
  check_budget(feedback_bits);
  if (trials < 1) throw ContractViolation("train_rotation: need at least one trial");
  const int rows = static_cast<int>(base.rows());
  std::vector<int> best(rows, 0);
  if (feedback_bits == 0) return best;

  std::uniform_int_distribution<int> pick(0, (1 << feedback_bits) - 1);
  double best_score = -1.0;
  std::vector<int> candidate(rows);
  for (long t = 0; t < trials; ++t) {
    for (int& a : candidate) a = pick(rng);
    const double score = rotation_objective(base, candidate, feedback_bits);
    if (score > best_score) {
      best_score = score;
      best = candidate;
    }
  }
  return best;
}

Codebook build_dft_codebook(int m_t, int m, int feedback_bits, long trials, std::uint64_t seed) {
  check_budget(feedback_bits);
  const ComplexMatrix base = dft_base(m_t, m);
  Rng rng(seed);
  Codebook book = orbit_codebook(CodebookKind::dft, base, train_rotation(base, feedback_bits, trials, rng),
                                 feedback_bits);
  book.seed = seed;
  book.trials = trials;
  return book;
}

Codebook build_w_codebook(int m_t, int m, int feedback_bits, long trials, std::uint64_t seed) {
  Codebook book = build_dft_codebook(m_t, m, feedback_bits, trials, seed);
  book.kind = CodebookKind::w;
  return book;
}

Codebook build_q_codebook(int m, int feedback_bits) {
  check_budget(feedback_bits);
  std::vector<int> exponents(m);
  std::iota(exponents.begin(), exponents.end(), 0);
  return orbit_codebook(CodebookKind::q, dft_base(m, m), std::move(exponents), feedback_bits);
}

std::vector<ComplexMatrix> expand_polar_codebook(const Codebook& w_book, const Codebook& q_book) {
  std::vector<ComplexMatrix> out;
  for (const auto& w : w_book.matrices)
    for (const auto& q : q_book.matrices) out.push_back(w * q);
  return out;
}

SubstreamProfile substream_capacities(const ComplexMatrix& g, double es_over_n0, int m) {
  const int streams = static_cast<int>(g.cols());
  SubstreamProfile profile;
  profile.capacities.resize(streams);
  // Tail capacities C_i = C(columns i..M-1); C_M = 0.
  std::vector<double> tail(streams + 1, 0.0);
  for (int i = streams - 1; i >= 0; --i) tail[i] = logdet_capacity(g.rightCols(streams - i), es_over_n0, m);
  for (int i = 0; i < streams; ++i) profile.capacities[i] = tail[i] - tail[i + 1];
  profile.mean = streams > 0 ? tail[0] / streams : 0.0;
  for (double c : profile.capacities) profile.polarization += (c - profile.mean) * (c - profile.mean);
  return profile;
}

CapacitySelection select_capacity(const ComplexMatrix& h, const Codebook& book, double es_over_n0, int m) {
  if (book.matrices.empty()) throw ContractViolation("select_capacity: empty codebook");
  CapacitySelection best;
  best.capacity = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < book.matrices.size(); ++k) {
    const double c = logdet_capacity(h * book.matrices[k], es_over_n0, m);
    ++best.cost.capacity_evaluations;
    if (c > best.capacity) {
      best.capacity = c;
      best.index = static_cast<int>(k);
    }
  }
  return best;
}

PolarSelection select_polar(const ComplexMatrix& h, const Codebook& w_book, const Codebook& q_book,
                            double es_over_n0, int m) {
  if (q_book.matrices.empty()) throw ContractViolation("select_polar: empty Q codebook");
  const CapacitySelection first = select_capacity(h, w_book, es_over_n0, m);
  PolarSelection out;
  out.w_index = first.index;
  out.capacity = first.capacity;
  out.cost = first.cost;

  const ComplexMatrix hw = h * w_book.matrices[first.index];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < q_book.matrices.size(); ++k) {
    SubstreamProfile p = substream_capacities(hw * q_book.matrices[k], es_over_n0, m);
    ++out.cost.profile_evaluations;
    if (p.polarization > best) {
      best = p.polarization;
      out.q_index = static_cast<int>(k);
      out.profile = std::move(p);
    }
  }
  out.precoder = w_book.matrices[out.w_index] * q_book.matrices[out.q_index];
  return out;
}

ComplexMatrix optimal_q(const ComplexMatrix& h, const ComplexMatrix& w) {
  const ComplexMatrix hw = h * w;
  if (hw.rows() < hw.cols()) throw ContractViolation("optimal_q: H W must have at least as many rows as streams");
  return svd(hw).v;
}

ComplexMatrix optimal_f(const ComplexMatrix& h, int m) {
  if (m < 1 || m > std::min(h.rows(), h.cols())) throw ContractViolation("optimal_f: need 1 <= m <= min(M_R, M_T)");
  const SvdResult s = svd(h);
  return s.v.rightCols(m);
}

bool optimal_f_ill_conditioned(const ComplexMatrix& h, int m, double relative_gap) {
  const SvdResult s = svd(h);
  const Eigen::Index p = s.sigma.size();
  const double top = s.sigma[p - 1];
  if (top == 0.0) return true;
  const double kept = s.sigma[p - m];
  double below = 0.0;
  if (p - m - 1 >= 0)
    below = s.sigma[p - m - 1];
  else if (h.cols() == p)
    return false;  // m spans the whole input space
  return (kept - below) <= relative_gap * top;
}

}  // namespace polarprec
