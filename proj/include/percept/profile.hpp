#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "percept/intervention.hpp"
#include "percept/scm.hpp"

namespace percept {

/// How a receiver aggregates descriptor-level weights into one
/// variable-level coefficient: the plain sum of the weight matrix, or
/// that sum divided by the number of cause descriptors.
enum class Tau { kSum, kMean };

std::string to_string(Tau tau);
/// "sum" or "mean"; throws ValidationError otherwise.
Tau parse_tau(std::string_view s);

/// Cause-effect pair imposed from outside the receiver (rules, bylaws).
/// Survives even when the variables have no descriptors.
struct AssumedEdge {
  std::string from;
  std::string to;
  std::optional<double> weight;

  friend bool operator==(const AssumedEdge&, const AssumedEdge&) = default;
};

enum class SignificationKind { kOrientation, kMatrix, kEmpty };

/// One causal relational statement about the pair (from, to).
///  - orientation: from -> to, optional scalar weight (default 1)
///  - matrix: descriptor weight matrix, rows = Θ(from), cols = Θ(to)
///  - empty: the receiver makes no statement about the pair
struct Signification {
  std::string from;
  std::string to;
  SignificationKind kind = SignificationKind::kOrientation;
  std::optional<double> weight;
  std::vector<std::vector<double>> phi_bar;

  friend bool operator==(const Signification&, const Signification&) = default;
};

struct InterventionPlan {
  InterventionGrid grid;
  std::size_t max_order = 1;

  friend bool operator==(const InterventionPlan&, const InterventionPlan&) = default;
};

struct ReceiverProfile {
  std::string id;
  std::vector<std::string> variables;
  /// Categorization: variable -> descriptors. A missing key means Θ = ∅.
  std::map<std::string, std::vector<std::string>> descriptors;
  std::vector<AssumedEdge> assumed_edges;
  std::vector<Signification> significations;
  /// Missing variables default to N(0, 1).
  std::map<std::string, NoiseParams> noise;
  Tau tau = Tau::kMean;
  std::optional<InterventionPlan> interventions;

  const std::vector<std::string>& descriptors_of(const std::string& variable) const;
  NoiseParams noise_of(const std::string& variable) const;

  friend bool operator==(const ReceiverProfile&, const ReceiverProfile&) = default;
};

/// Parses and validates a profile document (UTF-8 JSON). Unknown keys
/// are rejected. Throws SchemaError for structural problems and
/// ValidationError (or a subclass) for semantic ones.
ReceiverProfile parse_profile(std::string_view document);

/// Inverse of parse_profile; keys in a fixed order.
std::string serialize_profile(const ReceiverProfile& profile);

/// Semantic checks shared by the parser and the assemblers.
void validate_profile(const ReceiverProfile& profile);

/// Variable-level model. Edges are the asserted orientations, the
/// assumed edges and the matrix-signified pairs, whose coefficient is
/// the tau-aggregate of the weight matrix.
/// Throws CycleError, MissingDescriptors.
LinearScm assemble_high_level(const ReceiverProfile& profile);

/// tau-aggregate of one weight matrix.
double aggregate_weights(const std::vector<std::vector<double>>& phi_bar, Tau tau);

/// Name of the low-level node for a descriptor: "X1.tutoring".
std::string descriptor_node(const std::string& variable, const std::string& descriptor);

/// Descriptor-level model: one node per descriptor, one edge per entry
/// of every weight matrix. Descriptors of the same variable are
/// unconnected and receive equal shares of the variable's noise mean
/// and variance. Orientation and assumed edges have no descriptor-level
/// counterpart and are not represented. Throws MissingDescriptors.
LinearScm assemble_low_level(const ReceiverProfile& profile);

/// The profile's intervention plan expanded, or {∅} when absent.
InterventionSet profile_interventions(const ReceiverProfile& profile);

}  // namespace percept
