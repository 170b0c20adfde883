#pragma once

// Many-valued models over frames, formula evaluation, and the two validity
// relations: one quantifying over all valuations on a plain frame, one over
// the valuations admitted by an enriched frame's divisor structure.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmv/frames.hpp"
#include "lmv/mvcore.hpp"
#include "lmv/syntax.hpp"

namespace lmv {

/// A frame with a total valuation table (world x variable -> numerator over
/// the model grain n).
struct Model {
  LFrame frame;
  int n = 1;
  std::vector<std::string> vars;
  std::vector<int> table;  // [world * vars.size() + var] = numerator

  int value(int world, int var) const { return table[world * vars.size() + var]; }
  int var_index(const std::string& name) const;
  void validate() const;
};

class BudgetError : public std::runtime_error {
 public:
  BudgetError(uint64_t required, uint64_t cap)
      : std::runtime_error("enumeration budget exceeded: needs " +
                           std::to_string(required) + " valuations, cap is " +
                           std::to_string(cap)),
        required(required),
        cap(cap) {}
  uint64_t required, cap;
};

struct Budget {
  uint64_t max_valuations = 10'000'000;
};

/// Value of f at one world, as a numerator over the model grain.
int eval(const Model& m, int world, const Formula& f);
TruthValue eval_tv(const Model& m, const std::string& world, const Formula& f);

/// True when f evaluates to 1 at every world.
bool is_true(const Model& m, const Formula& f);

struct Countermodel {
  Model model;
  int world;  // first world where the formula falls short of 1
};

struct Verdict {
  bool valid = false;
  std::optional<Countermodel> witness;
};

/// Validity over all valuations of the given variables (defaults to the
/// formula's own variables). Witnesses are reported in enumeration order:
/// valuations ordered lexicographically by world, then variable, then value.
Verdict valid_n(const LFrame& f, int n, const Formula& phi, Budget budget = {},
                int jobs = 1);

/// Validity over the valuations admitted by the enriched frame: the value at
/// u ranges over the subchain of the world's local grain.
Verdict valid(const LnFrame& f, const Formula& phi, Budget budget = {},
              int jobs = 1);

/// The stream of models based on an enriched frame, restricted to the given
/// variables; index order is the countermodel enumeration order.
class ModelStream {
 public:
  ModelStream(const LnFrame& f, std::vector<std::string> vars);
  ModelStream(const LFrame& f, int n, std::vector<std::string> vars);

  uint64_t count() const { return total_; }
  Model at(uint64_t index) const;

  /// Write just the valuation table of entry `index`; avoids copying the
  /// frame in enumeration loops.
  void fill_table(uint64_t index, std::vector<int>& table) const;

 private:
  LFrame frame_;
  int n_;
  std::vector<std::string> vars_;
  std::vector<std::vector<int>> cell_values_;  // per (world-major, var) cell
  uint64_t total_;
  void init(const std::vector<int>& local_grain);
};

/// All models based on the enriched frame over the given variables.
std::vector<Model> models_based_on(const LnFrame& f, std::vector<std::string> vars);

}  // namespace lmv
