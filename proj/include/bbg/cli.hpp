#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bbg/pipeline.hpp"

namespace bbg::cli {

/// Exit codes: 0 success, 1 usage or validation error, 2 Monte-Carlo retry
/// budget exhausted.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kBudget = 2;

struct RunConfig {
  std::string spec_path;
  uint64_t seed = 0;
  unsigned confidence = 20;
  std::string p_hint;  // decimal, empty = unknown
  std::string out_path;
  unsigned jobs = 1;
};

int cmd_unipotent(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_coordinatize(const RunConfig &cfg, std::ostream &out, std::ostream &err);

struct RhoConfig {
  std::string frame_path;   // output of coordinatize
  std::string element_json; // base-group element wire form (PGL2 specs only)
  bool invert = false;      // input is a matrix, print the preimage
  std::string matrix_json;
  unsigned roundtrip = 0;   // sample n random elements and verify rho^-1(rho(x)) = x
};

int cmd_rho(const RunConfig &cfg, const RhoConfig &rho_cfg, std::ostream &out, std::ostream &err);

struct BenchConfig {
  std::vector<uint64_t> primes{13, 101, 1009};
  unsigned reps = 3;
};

int cmd_bench(const RunConfig &cfg, const BenchConfig &bench_cfg, std::ostream &out,
              std::ostream &err);

/// One bench row per (procedure, q); wall_ms is informational, the counts are
/// seed-deterministic.
struct BenchRow {
  std::string procedure;
  uint64_t q = 0;
  size_t e_bits = 0;
  double wall_ms = 0;
  uint64_t leaf_mul = 0, leaf_inv = 0, leaf_eq = 0;
  uint64_t k_adds = 0, k_muls = 0;
};

std::vector<BenchRow> run_bench(const GroupSpec &spec, uint64_t seed, unsigned reps);
std::string bench_csv_header();
std::string bench_csv_row(const BenchRow &row);

/// Serialization helpers shared with the acceptance suite.
std::string certificate_json(Pipeline &pipe, const UnipotentCertificate &cert, uint64_t seed);
std::string matrix3k_json(FieldK &K, const Matrix3K &m);

}  // namespace bbg::cli
