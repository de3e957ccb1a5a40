#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relbetti/betti.hpp"

namespace relbetti {

// One input object. Files are JSON documents with a "kind" field:
// groupoid, extension, cocycle, weighted_sum or compression.
struct Document {
  std::string kind;
  std::string name;
  std::string origin;  // file name or caller-supplied tag
  std::string hash;    // of the input text
  std::optional<FiniteGroupoid> groupoid;  // groupoid, or the relation of a cocycle
  std::optional<TwoCocycle> cocycle;
  std::optional<Extension> extension;      // the algebra the Hochschild pipeline runs on
  std::vector<Extension> parts;            // weighted_sum
  std::vector<Rational> weights;
  SumMode mode = SumMode::componentwise;
  SVec projection;                         // compression
};

// Throws ParseError with "<origin>: <json path>: message".
Document parse_document(const std::string& text, const std::string& origin);
Document load_document(const std::string& path);

struct RunOptions {
  size_t degree_cap = 3;
  std::string pipeline = "hochschild";  // hochschild | sauer | both
  bool extended_scope = false;
};

enum class Outcome { ok = 0, discrepancy = 1, input_error = 2, internal_error = 3 };

struct Report {
  Outcome outcome = Outcome::ok;
  std::string json;  // deterministic, keys in a fixed order
};

Report run_validate(const Document& d);
Report run_betti(const Document& d, const RunOptions& opt);
Report run_homology(const Document& d, const RunOptions& opt);
Report run_fiber_square(const Document& d, const RunOptions& opt);
// theorem: compression | directed_sum | central_quadratic | groupoid_equality | residual
Report run_verify(const Document& d, const std::string& theorem, const RunOptions& opt);

// Report for an input that could not be loaded.
Report error_report(const std::string& command, const std::string& message, Outcome outcome,
                    const std::vector<std::string>& witnesses = {});

}  // namespace relbetti
