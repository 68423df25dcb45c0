#pragma once

// Finite-feedback unitary precoding: DFT and polar codebooks, the capacity
// and polarization selection criteria, the SIC substream-capacity
// decomposition and the closed-form optimal precoders.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polarprec/channel.hpp"
#include "polarprec/numerics.hpp"

namespace polarprec {

enum class CodebookKind { dft, w, q };

std::string_view to_string(CodebookKind kind);

struct Codebook {
  CodebookKind kind = CodebookKind::dft;
  int m_t = 0;  // rows of every member (M for kind q)
  int m = 0;
  int feedback_bits = 0;
  std::vector<int> rotation;  // exponents a_k of the diagonal rotation
  std::uint64_t seed = 0;
  long trials = 0;
  std::vector<ComplexMatrix> matrices;

  std::size_t size() const { return matrices.size(); }
};

/// Per-substream SIC capacities, I_1..I_M in bits, their mean and
/// sum_i (I_i - mean)^2.
struct SubstreamProfile {
  std::vector<double> capacities;
  double mean = 0.0;
  double polarization = 0.0;

  double total() const;
};

/// Evaluation counters, one capacity (log-det) or one profile per count.
struct SelectionCost {
  long capacity_evaluations = 0;
  long profile_evaluations = 0;
};

struct CapacitySelection {
  int index = 0;
  double capacity = 0.0;
  SelectionCost cost;
};

struct PolarSelection {
  int w_index = 0;
  int q_index = 0;
  double capacity = 0.0;
  SubstreamProfile profile;
  ComplexMatrix precoder;  // W Q
  SelectionCost cost;
};

// ---- Codebooks --------------------------------------------------------------

/// First m columns of the m_t-point DFT matrix, entry (k, l) =
/// exp(i 2 pi k l / m_t) / sqrt(m_t).
ComplexMatrix dft_base(int m_t, int m);

/// diag(exp(i 2 pi a_k / 2^bits))
ComplexMatrix rotation_matrix(std::span<const int> exponents, int feedback_bits);

/// min over l = 1..2^bits - 1 of the chordal distance between base and
/// Theta^l base. Zero when bits == 0.
double rotation_objective(const ComplexMatrix& base, std::span<const int> exponents, int feedback_bits);

/// Random search over exponent vectors in {0..2^bits-1}^{rows}; keeps the
/// first best. bits == 0 returns the zero vector without drawing.
std::vector<int> train_rotation(const ComplexMatrix& base, int feedback_bits, long trials, Rng& rng);

/// {Theta^l F_DFT : l = 0..2^bits - 1} with a trained Theta.
Codebook build_dft_codebook(int m_t, int m, int feedback_bits, long trials, std::uint64_t seed);
/// Same construction as build_dft_codebook, tagged as the W book of a polar
/// codebook.
Codebook build_w_codebook(int m_t, int m, int feedback_bits, long trials, std::uint64_t seed);
/// {Theta_Q^l Q_DFT} with the fixed rotation Theta_Q = diag(1, w, ..., w^{M-1}),
/// w = exp(i 2 pi / 2^bits). No training.
Codebook build_q_codebook(int m, int feedback_bits);

/// Product codebook {W Q} (for inspection; selection never enumerates it).
std::vector<ComplexMatrix> expand_polar_codebook(const Codebook& w_book, const Codebook& q_book);

// ---- Capacity profiles and selection ------------------------------------------

/// I_i = C(G_i..M) - C(G_{i+1}..M), empty tail 0, with power normalised by
/// the total stream count m.
SubstreamProfile substream_capacities(const ComplexMatrix& g, double es_over_n0, int m);

/// argmax_F log-det capacity of H F; ties keep the lowest index.
CapacitySelection select_capacity(const ComplexMatrix& h, const Codebook& book, double es_over_n0, int m);

/// Two-step polarization criterion: W maximises capacity over the W book,
/// then Q maximises the polarization measure of H W Q over the Q book.
PolarSelection select_polar(const ComplexMatrix& h, const Codebook& w_book, const Codebook& q_book,
                            double es_over_n0, int m);

/// V of svd(H W): the unitary that maximises every tail sum of substream
/// capacities for a fixed W.
ComplexMatrix optimal_q(const ComplexMatrix& h, const ComplexMatrix& w);

/// Right-singular vectors of H for its m largest singular values.
ComplexMatrix optimal_f(const ComplexMatrix& h, int m);

/// True when the m-th and (m+1)-th largest singular values of H (or the
/// m-th and zero) are too close to pin down optimal_f's span.
bool optimal_f_ill_conditioned(const ComplexMatrix& h, int m, double relative_gap = 1e-8);

// ---- Codebook files ---------------------------------------------------------

/// Header line, then one block per matrix with one row per line as "re im"
/// pairs in 17 significant digits. Several codebooks may be concatenated.
std::string format_codebook(const Codebook& book);
std::vector<Codebook> parse_codebooks(const std::string& text);
void write_codebooks(const std::filesystem::path& path, std::span<const Codebook> books);
std::vector<Codebook> read_codebooks(const std::filesystem::path& path);
/// FNV-1a of format_codebook, as 16 hex digits.
std::string codebook_digest(const Codebook& book);

}  // namespace polarprec
