#pragma once

#include <filesystem>
#include <optional>

#include "sylnet/problem.hpp"

namespace sylnet {

/// Problem directory layout: A.mat, B.mat, C.mat (matrix text format),
/// partition.txt ("m_1 ... m_n / r_1 ... r_n"), graph.txt, penalty.txt
/// ("none" or "l1 <alpha>") and, when known, X_star.mat.
void write_problem_bundle(const std::filesystem::path& dir, const SylvesterProblem& prob,
                          const DenseMatrix* x_star = nullptr);

SylvesterProblem read_problem_bundle(const std::filesystem::path& dir);

/// X_star.mat if the bundle carries one.
std::optional<DenseMatrix> read_bundle_reference(const std::filesystem::path& dir);

std::string format_penalty(const PenaltySpec& penalty);
PenaltySpec parse_penalty(const std::string& line);

} // namespace sylnet
