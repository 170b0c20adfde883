#include "lmv/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "lmv/mvcore.hpp"

namespace lmv {

int Model::var_index(const std::string& name) const {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw std::invalid_argument("undeclared variable: " + name);
  return static_cast<int>(it - vars.begin());
}

void Model::validate() const {
  frame.validate();
  if (n < 1) throw std::invalid_argument("model grain must be positive");
  if (table.size() != frame.worlds.size() * vars.size())
    throw std::invalid_argument("valuation table must be total");
  for (int v : table)
    if (v < 0 || v > n) throw std::invalid_argument("valuation value out of range");
}

// ---------------------------------------------------------------------------
// Compiled evaluation: the desugared formula is flattened to postorder
// instructions and evaluated once per world column.

namespace {

struct Instr {
  enum class Op { Var, One, Neg, Imp, Modal } op;
  int a = -1, b = -1;  // operand instruction indices
  int var = -1;        // Var: model variable index
  int modal = -1;      // Modal: index into the modal scan table
  int arity = 0;
  int args = -1;       // Modal: first operand index in args_pool
};

struct CompiledFormula {
  std::vector<Instr> code;       // postorder; result of the last entry is phi
  std::vector<int> args_pool;    // operand lists for modal instructions
  std::vector<std::string> modal_names;
};

void compile_rec(const Formula& f, const Model& shape, CompiledFormula& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var: {
      Instr i;
      i.op = Instr::Op::Var;
      i.var = shape.var_index(f.name());
      out.code.push_back(i);
      return;
    }
    case K::One: {
      out.code.push_back({Instr::Op::One});
      return;
    }
    case K::Neg: {
      compile_rec(f.child(0), shape, out);
      Instr i;
      i.op = Instr::Op::Neg;
      i.a = static_cast<int>(out.code.size()) - 1;
      out.code.push_back(i);
      return;
    }
    case K::Imp: {
      compile_rec(f.child(0), shape, out);
      int a = static_cast<int>(out.code.size()) - 1;
      compile_rec(f.child(1), shape, out);
      int b = static_cast<int>(out.code.size()) - 1;
      Instr i;
      i.op = Instr::Op::Imp;
      i.a = a;
      i.b = b;
      out.code.push_back(i);
      return;
    }
    case K::Modal: {
      std::vector<int> operands;
      for (size_t j = 0; j < f.child_count(); ++j) {
        compile_rec(f.child(j), shape, out);
        operands.push_back(static_cast<int>(out.code.size()) - 1);
      }
      Instr i;
      i.op = Instr::Op::Modal;
      i.arity = static_cast<int>(operands.size());
      i.args = static_cast<int>(out.args_pool.size());
      for (int x : operands) out.args_pool.push_back(x);
      i.modal = static_cast<int>(out.modal_names.size());
      out.modal_names.push_back(f.name());
      out.code.push_back(i);
      return;
    }
    default:
      throw std::logic_error("compile expects a desugared formula");
  }
}

// Per-frame successor tails, resolved once.
struct SuccessorTable {
  // per modal instruction, per world: flat list of successor tuples
  std::vector<std::vector<std::vector<std::vector<int>>>> tails;

  SuccessorTable(const LFrame& frame, const CompiledFormula& cf) {
    tails.resize(cf.modal_names.size());
    for (size_t m = 0; m < cf.modal_names.size(); ++m) {
      tails[m].resize(frame.worlds.size());
      for (int u = 0; u < static_cast<int>(frame.worlds.size()); ++u)
        tails[m][u] = frame.successors(cf.modal_names[m], u);
    }
  }
};

class Evaluator {
 public:
  Evaluator(const LFrame& frame, int n, const Model& shape, const Formula& phi)
      : frame_(frame), n_(n) {
    compile_rec(desugar(phi), shape, cf_);
    succ_ = std::make_unique<SuccessorTable>(frame, cf_);
    values_.assign(cf_.code.size(), std::vector<int>(frame.worlds.size(), 0));
  }

  // Evaluate all instructions over all worlds for one valuation table.
  void run(const std::vector<int>& table, size_t num_vars) {
    const int W = static_cast<int>(frame_.worlds.size());
    for (size_t i = 0; i < cf_.code.size(); ++i) {
      const Instr& ins = cf_.code[i];
      auto& out = values_[i];
      switch (ins.op) {
        case Instr::Op::Var:
          for (int u = 0; u < W; ++u) out[u] = table[u * num_vars + ins.var];
          break;
        case Instr::Op::One:
          for (int u = 0; u < W; ++u) out[u] = n_;
          break;
        case Instr::Op::Neg: {
          const auto& a = values_[ins.a];
          for (int u = 0; u < W; ++u) out[u] = chainop::neg(a[u], n_);
          break;
        }
        case Instr::Op::Imp: {
          const auto& a = values_[ins.a];
          const auto& b = values_[ins.b];
          for (int u = 0; u < W; ++u) out[u] = chainop::imp(a[u], b[u], n_);
          break;
        }
        case Instr::Op::Modal: {
          for (int u = 0; u < W; ++u) {
            int best = n_;  // empty successor set gives 1
            for (const auto& tail : succ_->tails[ins.modal][u]) {
              int inner = 0;
              for (int j = 0; j < ins.arity; ++j) {
                int operand = cf_.args_pool[ins.args + j];
                inner = std::max(inner, values_[operand][tail[j]]);
              }
              best = std::min(best, inner);
            }
            out[u] = best;
          }
          break;
        }
      }
    }
  }

  int value_at(int world) const { return values_.back()[world]; }

  // -1 if phi holds everywhere, else the first failing world.
  int first_failure() const {
    const auto& root = values_.back();
    for (size_t u = 0; u < root.size(); ++u)
      if (root[u] != n_) return static_cast<int>(u);
    return -1;
  }

 private:
  const LFrame& frame_;
  int n_;
  CompiledFormula cf_;
  std::unique_ptr<SuccessorTable> succ_;
  std::vector<std::vector<int>> values_;
};

}  // namespace

int eval(const Model& m, int world, const Formula& f) {
  m.validate();
  if (world < 0 || world >= static_cast<int>(m.frame.worlds.size()))
    throw std::invalid_argument("unknown world index");
  Evaluator ev(m.frame, m.n, m, f);
  ev.run(m.table, m.vars.size());
  return ev.value_at(world);
}

TruthValue eval_tv(const Model& m, const std::string& world, const Formula& f) {
  return TruthValue{eval(m, m.frame.world_index(world), f), m.n};
}

bool is_true(const Model& m, const Formula& f) {
  m.validate();
  Evaluator ev(m.frame, m.n, m, f);
  ev.run(m.table, m.vars.size());
  return ev.first_failure() < 0;
}

// ---------------------------------------------------------------------------
// Valuation streams

void ModelStream::init(const std::vector<int>& local_grain) {
  const size_t W = frame_.worlds.size();
  cell_values_.clear();
  for (size_t u = 0; u < W; ++u) {
    std::vector<int> allowed;
    const int step = n_ / local_grain[u];
    for (int v = 0; v <= n_; v += step) allowed.push_back(v);
    for (size_t p = 0; p < vars_.size(); ++p) cell_values_.push_back(allowed);
  }
  total_ = 1;
  for (const auto& c : cell_values_) total_ *= c.size();
  if (vars_.empty()) total_ = 1;
}

ModelStream::ModelStream(const LnFrame& f, std::vector<std::string> vars)
    : frame_(f.base), n_(f.n), vars_(std::move(vars)) {
  auto rep = validate_ln(f);
  if (!rep.ok)
    throw std::invalid_argument("invalid enriched frame: " + rep.clause + ": " +
                                rep.detail);
  std::vector<int> s(f.base.worlds.size());
  for (size_t u = 0; u < s.size(); ++u) s[u] = s_value(f, static_cast<int>(u));
  init(s);
}

ModelStream::ModelStream(const LFrame& f, int n, std::vector<std::string> vars)
    : frame_(f), n_(n), vars_(std::move(vars)) {
  f.validate();
  if (n < 1) throw std::invalid_argument("grain must be positive");
  init(std::vector<int>(f.worlds.size(), n));
}

void ModelStream::fill_table(uint64_t index, std::vector<int>& table) const {
  if (index >= total_) throw std::out_of_range("valuation index out of range");
  table.resize(cell_values_.size());
  // mixed-radix decode, first cell most significant
  for (int c = static_cast<int>(cell_values_.size()) - 1; c >= 0; --c) {
    const auto& allowed = cell_values_[c];
    table[c] = allowed[index % allowed.size()];
    index /= allowed.size();
  }
}

Model ModelStream::at(uint64_t index) const {
  Model m{frame_, n_, vars_, {}};
  fill_table(index, m.table);
  return m;
}

std::vector<Model> models_based_on(const LnFrame& f, std::vector<std::string> vars) {
  ModelStream stream(f, std::move(vars));
  std::vector<Model> out;
  out.reserve(stream.count());
  for (uint64_t i = 0; i < stream.count(); ++i) out.push_back(stream.at(i));
  return out;
}

// ---------------------------------------------------------------------------
// Validity search

namespace {

Verdict search(const LFrame& frame, int n, const Formula& phi,
               const ModelStream& stream, Budget budget, int jobs) {
  const uint64_t total = stream.count();
  if (total > budget.max_valuations) throw BudgetError(total, budget.max_valuations);

  const Model shape = stream.at(0);
  const size_t num_vars = shape.vars.size();
  std::atomic<uint64_t> best{total};

  auto scan = [&](Evaluator& ev, std::vector<int>& table, uint64_t begin,
                  uint64_t end) {
    for (uint64_t i = begin; i < end; ++i) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      stream.fill_table(i, table);
      ev.run(table, num_vars);
      if (ev.first_failure() >= 0) {
        uint64_t cur = best.load(std::memory_order_relaxed);
        while (i < cur &&
               !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
        }
        return;
      }
    }
  };

  if (jobs <= 1 || total < 4096) {
    Evaluator ev(frame, n, shape, phi);
    std::vector<int> table;
    scan(ev, table, 0, total);
  } else {
    const unsigned hw = std::thread::hardware_concurrency();
    const int J = std::min<int>(jobs, hw > 0 ? static_cast<int>(hw) : 4);
    std::atomic<uint64_t> cursor{0};
    const uint64_t block = 4096;
    std::vector<std::thread> pool;
    for (int t = 0; t < J; ++t)
      pool.emplace_back([&] {
        Evaluator ev(frame, n, shape, phi);
        std::vector<int> table;
        while (true) {
          uint64_t begin = cursor.fetch_add(block);
          if (begin >= total || begin >= best.load(std::memory_order_relaxed))
            return;
          scan(ev, table, begin, std::min(begin + block, total));
        }
      });
    for (auto& th : pool) th.join();
  }

  uint64_t found = best.load();
  if (found == total) return {true, std::nullopt};

  Model witness = stream.at(found);
  Evaluator ev(frame, n, shape, phi);
  ev.run(witness.table, num_vars);
  return {false, Countermodel{std::move(witness), ev.first_failure()}};
}

}  // namespace

Verdict valid_n(const LFrame& f, int n, const Formula& phi, Budget budget,
                int jobs) {
  ModelStream stream(f, n, variables(phi));
  return search(f, n, phi, stream, budget, jobs);
}

Verdict valid(const LnFrame& f, const Formula& phi, Budget budget, int jobs) {
  ModelStream stream(f, variables(phi));
  return search(f.base, f.n, phi, stream, budget, jobs);
}

}  // namespace lmv
