#pragma once

// Versioned instance files. Each file is one line of JSON (the header),
// a '\n', then little-endian binary payload blocks in the order the header
// lists them:
//
//   logbarrier.dataset  v1: weights[n] f64, samples
//                           classical: n*d f64, row-major
//                           quantum:   n*d*d (re, im) f64 pairs, row-major
//                       optional: counts[n] i64 ("counts": true),
//                                 rho_true d*d (re, im) ("rho_true": true)
//   logbarrier.poisson  v1: b n*d f64 row-major, y[n] i64,
//                       optional lambda_true[d] f64 ("lambda_true": true)

#include <string>

#include "logbarrier/problems.hpp"

namespace logbarrier {

inline constexpr int kFileFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_dataset(const std::string& path, const ClassicalDataset& ds);
void write_dataset(const std::string& path, const QuantumDataset& ds);
ClassicalDataset read_classical_dataset(const std::string& path);
QuantumDataset read_quantum_dataset(const std::string& path);

/// Quantum dataset container with per-operator counts and optional ground truth.
void write_qst_instance(const std::string& path, const QSTInstance& q);
QSTInstance read_qst_instance(const std::string& path);

void write_poisson_instance(const std::string& path, const PoissonInstance& p);
PoissonInstance read_poisson_instance(const std::string& path);

}  // namespace logbarrier
