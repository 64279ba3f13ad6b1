#pragma once

#include "seqpomdp/grid_dp.hpp"
#include "seqpomdp/model.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace seqpomdp {

/// Malformed or unreadable input file (unknown field, wrong type, bad JSON).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Artifact does not match the model or is internally inconsistent.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a JSON model file. Two forms, selected by "type":
///   general:  states, prior, basis, zeta, rewards, beta
///   noisy_or: n_features, baselines, zeta, rewards, beta, prior_mode
/// Unknown fields are rejected. noisy_or is expanded via build_noisy_or.
ModelSpec load_model_spec(const std::string& path);
ModelSpec parse_model_spec(const std::string& json_text);

/// Versioned text persistence for a solve artifact (value + policy tables).
/// Values are written with 17 significant digits, so the text round-trip is
/// bit-exact for doubles.
void save_solution(const Solution& solution, std::ostream& out);
void save_solution_file(const Solution& solution, const std::string& path);

/// Loads an artifact and checks it against the model's hash before returning.
Solution load_solution(std::istream& in, const Model& model);
Solution load_solution_file(const std::string& path, const Model& model);

std::string hash_hex(std::uint64_t hash);

}  // namespace seqpomdp
