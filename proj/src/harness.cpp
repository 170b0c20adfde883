#include "lmv/harness.hpp"

#include <algorithm>

#include "lmv/algebra.hpp"
#include "lmv/io.hpp"

namespace lmv {

// ---------------------------------------------------------------------------
// Class registry

ClassPredicate class_all() {
  return {"all", [](const LFrame&) { return true; },
          [](const LnFrame&) { return true; }};
}

ClassPredicate class_empty_relation() {
  auto test = [](const LFrame& f) {
    for (const auto& [name, tuples] : f.relations)
      if (!tuples.empty()) return false;
    return true;
  };
  return {"empty-relation", test,
          [test](const LnFrame& f) { return test(f.base); }};
}

ClassPredicate class_reflexive() {
  auto test = [](const LFrame& f) {
    for (const auto& [name, k] : f.sig.modalities) {
      for (int u = 0; u < static_cast<int>(f.worlds.size()); ++u) {
        std::vector<int> diag(k + 1, u);
        const auto& tuples = f.relations.at(name);
        if (!std::binary_search(tuples.begin(), tuples.end(), diag)) return false;
      }
    }
    return true;
  };
  return {"reflexive", test, [test](const LnFrame& f) { return test(f.base); }};
}

ClassPredicate class_ru_sub_r1() {
  auto test = [](const LnFrame& f) {
    for (const auto& [name, tuples] : f.base.relations)
      for (const auto& t : tuples)
        for (size_t j = 1; j < t.size(); ++j)
          if (!f.in_r(1, t[j])) return false;
    return true;
  };
  return {"ru-sub-r1", nullptr, test};
}

ClassPredicate class_c1(int k) {
  auto test = [k](const LnFrame& f) {
    if (f.n % k != 0) throw std::invalid_argument("k must divide n");
    for (int u = 0; u < static_cast<int>(f.base.worlds.size()); ++u)
      if (f.in_r(k, u)) return false;
    return true;
  };
  return {"C1(" + std::to_string(k) + ")", nullptr, test};
}

ClassPredicate class_c2(int k) {
  auto test = [k](const LnFrame& f) {
    if (f.n % k != 0) throw std::invalid_argument("k must divide n");
    for (const auto& [name, arity] : f.base.sig.modalities)
      if (arity != 1)
        throw std::invalid_argument("C2 is defined for unary modalities");
    for (int u = 0; u < static_cast<int>(f.base.worlds.size()); ++u) {
      bool covers = true;
      for (int v : f.r.at(k)) {
        bool found = false;
        for (const auto& [name, tuples] : f.base.relations) {
          if (std::binary_search(tuples.begin(), tuples.end(),
                                 std::vector<int>{u, v}))
            found = true;
        }
        if (!found) {
          covers = false;
          break;
        }
      }
      if (covers) return true;
    }
    return false;
  };
  return {"C2(" + std::to_string(k) + ")", nullptr, test};
}

ClassPredicate class_complement(ClassPredicate c) {
  ClassPredicate out;
  out.name = "not-" + c.name;
  if (c.on_l) out.on_l = [c](const LFrame& f) { return !c.on_l(f); };
  out.on_ln = [c](const LnFrame& f) { return !c.on_ln(f); };
  return out;
}

ClassPredicate class_and(ClassPredicate a, ClassPredicate b) {
  ClassPredicate out;
  out.name = a.name + "-and-" + b.name;
  if (a.on_l && b.on_l)
    out.on_l = [a, b](const LFrame& f) { return a.on_l(f) && b.on_l(f); };
  out.on_ln = [a, b](const LnFrame& f) { return a.on_ln(f) && b.on_ln(f); };
  return out;
}

ClassPredicate class_by_name(const std::string& name, std::optional<int> k) {
  if (name == "all") return class_all();
  if (name == "empty-relation") return class_empty_relation();
  if (name == "reflexive") return class_reflexive();
  if (name == "ru-sub-r1") return class_ru_sub_r1();
  if (name == "C1" || name == "c1") {
    if (!k) throw std::invalid_argument("class C1 needs k");
    return class_c1(*k);
  }
  if (name == "C2" || name == "c2") {
    if (!k) throw std::invalid_argument("class C2 needs k");
    return class_c2(*k);
  }
  throw std::invalid_argument("unknown class: " + name);
}

// ---------------------------------------------------------------------------
// Model sets

std::vector<LFrame> mod_n(const std::vector<Formula>& theory,
                          const std::vector<LFrame>& universe, int n,
                          Budget budget, int jobs) {
  std::vector<LFrame> out;
  for (const auto& f : universe) {
    bool all = true;
    for (const auto& phi : theory)
      if (!valid_n(f, n, phi, budget, jobs).valid) {
        all = false;
        break;
      }
    if (all) out.push_back(f);
  }
  return out;
}

std::vector<LnFrame> mod(const std::vector<Formula>& theory,
                         const std::vector<LnFrame>& universe, Budget budget,
                         int jobs) {
  std::vector<LnFrame> out;
  for (const auto& f : universe) {
    bool all = true;
    for (const auto& phi : theory)
      if (!valid(f, phi, budget, jobs).valid) {
        all = false;
        break;
      }
    if (all) out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formula enumeration

FormulaEnumeration enumerate_formulas(const Signature& sig, int max_depth,
                                      const std::vector<std::string>& vars) {
  sig.validate();
  FormulaEnumeration out;
  out.vars = vars;

  std::vector<int> level_of;  // depth of each enumerated formula

  auto push = [&](Formula f, FormulaEnumeration::Info info, int level) {
    out.formulas.push_back(std::move(f));
    out.info.push_back(std::move(info));
    level_of.push_back(level);
  };

  for (size_t v = 0; v < vars.size(); ++v)
    push(Formula::var(vars[v]),
         {Formula::Kind::Var, {}, static_cast<int>(v), ""}, 0);
  push(Formula::zero(), {Formula::Kind::Zero, {}, -1, ""}, 0);
  push(Formula::one(), {Formula::Kind::One, {}, -1, ""}, 0);

  for (int d = 1; d <= max_depth; ++d) {
    const int below = static_cast<int>(out.formulas.size());
    auto at_level = [&](int i) { return level_of[i] == d - 1; };

    for (int i = 0; i < below; ++i)
      if (at_level(i))
        push(Formula::neg(out.formulas[i]), {Formula::Kind::Neg, {i}, -1, ""}, d);

    for (int i = 0; i < below; ++i)
      for (int j = 0; j < below; ++j) {
        if (!at_level(i) && !at_level(j)) continue;
        push(Formula::imp(out.formulas[i], out.formulas[j]),
             {Formula::Kind::Imp, {i, j}, -1, ""}, d);
      }

    for (const auto& [name, k] : sig.modalities) {
      std::vector<int> pick(k, 0);
      while (true) {
        bool fresh = false;
        for (int j = 0; j < k; ++j) fresh = fresh || at_level(pick[j]);
        if (fresh) {
          std::vector<Formula> args;
          for (int j = 0; j < k; ++j) args.push_back(out.formulas[pick[j]]);
          push(Formula::modal(name, std::move(args)),
               {Formula::Kind::Modal, pick, -1, name}, d);
        }
        int j = k - 1;
        for (; j >= 0; --j) {
          if (++pick[j] < below) break;
          pick[j] = 0;
        }
        if (j < 0) break;
      }
    }
  }
  return out;
}

namespace {
std::vector<std::string> default_vars(int num_vars) {
  static const char* names[] = {"p", "q", "r", "s", "t"};
  std::vector<std::string> out;
  for (int i = 0; i < num_vars; ++i)
    out.push_back(i < 5 ? names[i] : "v" + std::to_string(i));
  return out;
}
}  // namespace

std::vector<Formula> theory_n(const LFrame& f, int n, int max_depth,
                              int num_vars, Budget budget) {
  std::vector<Formula> out;
  for (const auto& phi :
       enumerate_formulas(f.sig, max_depth, default_vars(num_vars)).formulas)
    if (valid_n(f, n, phi, budget).valid) out.push_back(phi);
  return out;
}

std::vector<Formula> theory_ln(const LnFrame& f, int max_depth, int num_vars,
                               Budget budget) {
  std::vector<Formula> out;
  for (const auto& phi :
       enumerate_formulas(f.base.sig, max_depth, default_vars(num_vars)).formulas)
    if (valid(f, phi, budget).valid) out.push_back(phi);
  return out;
}

// ---------------------------------------------------------------------------
// Closure checks

std::string closure_op_name(ClosureOp op) {
  switch (op) {
    case ClosureOp::GenSub: return "gen-sub";
    case ClosureOp::BoundedImage: return "bounded-image";
    case ClosureOp::DisjointUnion: return "disjoint-union";
    case ClosureOp::CanExtReflection: return "canext-reflection";
  }
  return "?";
}

ClosureOp closure_op_by_name(const std::string& name) {
  if (name == "gen-sub") return ClosureOp::GenSub;
  if (name == "bounded-image") return ClosureOp::BoundedImage;
  if (name == "disjoint-union") return ClosureOp::DisjointUnion;
  if (name == "canext-reflection") return ClosureOp::CanExtReflection;
  throw std::invalid_argument("unknown closure operation: " + name);
}

namespace {

// all maps [0..src) -> [0..dst), lexicographic; surjectivity filtered later
bool bump_map(std::vector<int>& map, int dst) {
  for (int i = static_cast<int>(map.size()) - 1; i >= 0; --i) {
    if (++map[i] < dst) return true;
    map[i] = 0;
  }
  return false;
}

bool surjective(const std::vector<int>& map, int dst) {
  std::vector<char> hit(dst, 0);
  for (int v : map) hit[v] = 1;
  for (char c : hit)
    if (!c) return false;
  return true;
}

size_t world_count(const LFrame& f) { return f.worlds.size(); }
size_t world_count(const LnFrame& f) { return f.base.worlds.size(); }

// Generic driver over the two frame flavours.
template <typename FrameT, typename Witness, typename Member, typename GenSub,
          typename Morph, typename Union, typename CanExt>
std::optional<Witness> closure_scan(const std::vector<FrameT>& universe,
                                    const std::set<ClosureOp>& ops,
                                    Member member, GenSub gen_sub, Morph morph,
                                    Union make_union, CanExt can_ext) {
  std::vector<char> inside(universe.size(), 0);
  for (size_t i = 0; i < universe.size(); ++i) inside[i] = member(universe[i]);

  if (ops.count(ClosureOp::GenSub)) {
    for (size_t i = 0; i < universe.size(); ++i) {
      if (!inside[i]) continue;
      const FrameT& f = universe[i];
      const int W = static_cast<int>(world_count(f));
      for (uint64_t mask = 1; mask < (uint64_t{1} << W); ++mask) {
        std::set<int> seeds;
        for (int u = 0; u < W; ++u)
          if ((mask >> u) & 1) seeds.insert(u);
        FrameT sub = gen_sub(f, seeds);
        if (!member(sub)) {
          Witness w;
          w.op = ClosureOp::GenSub;
          w.frame_a = f;
          w.result = std::move(sub);
          w.detail.assign(seeds.begin(), seeds.end());
          w.text = "member has a generated subframe outside the class";
          return w;
        }
      }
    }
  }

  if (ops.count(ClosureOp::BoundedImage)) {
    for (size_t i = 0; i < universe.size(); ++i) {
      if (!inside[i]) continue;
      const FrameT& f = universe[i];
      const int W = static_cast<int>(world_count(f));
      for (size_t j = 0; j < universe.size(); ++j) {
        const FrameT& g = universe[j];
        const int WG = static_cast<int>(world_count(g));
        if (WG > W) continue;
        std::vector<int> map(W, 0);
        do {
          if (!surjective(map, WG)) continue;
          if (!morph(f, g, map)) continue;
          if (!member(g)) {
            Witness w;
            w.op = ClosureOp::BoundedImage;
            w.frame_a = f;
            w.result = g;
            w.detail = map;
            w.text = "member has a bounded morphic image outside the class";
            return w;
          }
        } while (bump_map(map, WG));
      }
    }
  }

  if (ops.count(ClosureOp::DisjointUnion)) {
    for (size_t i = 0; i < universe.size(); ++i) {
      if (!inside[i]) continue;
      for (size_t j = i; j < universe.size(); ++j) {
        if (!inside[j]) continue;
        FrameT u = make_union(universe[i], universe[j]);
        if (!member(u)) {
          Witness w;
          w.op = ClosureOp::DisjointUnion;
          w.frame_a = universe[i];
          w.frame_b = universe[j];
          w.result = std::move(u);
          w.text = "union of members lies outside the class";
          return w;
        }
      }
    }
  }

  if (ops.count(ClosureOp::CanExtReflection)) {
    for (size_t i = 0; i < universe.size(); ++i) {
      if (inside[i]) continue;
      FrameT ce = can_ext(universe[i]);
      if (member(ce)) {
        Witness w;
        w.op = ClosureOp::CanExtReflection;
        w.frame_a = universe[i];
        w.result = std::move(ce);
        w.text = "canonical extension of a non-member lies inside the class";
        return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

ClosureReportLn closure_check_ln(const ClassPredicate& c,
                                 const std::vector<LnFrame>& universe,
                                 const std::set<ClosureOp>& ops) {
  auto witness = closure_scan<LnFrame, ClosureWitnessLn>(
      universe, ops, [&](const LnFrame& f) { return c.on_ln(f); },
      [](const LnFrame& f, const std::set<int>& seeds) {
        return generated_subframe_ln(f, seeds);
      },
      [](const LnFrame& f, const LnFrame& g, const std::vector<int>& map) {
        return is_ln_bounded_morphism(f, g, map);
      },
      [](const LnFrame& a, const LnFrame& b) {
        return disjoint_union_ln({a, b});
      },
      [](const LnFrame& f) { return canonical_extension_ln(f).frame; });
  if (witness) return {false, std::move(witness)};
  return {};
}

ClosureReportL closure_check_l(const ClassPredicate& c,
                               const std::vector<LFrame>& universe, int n,
                               const std::set<ClosureOp>& ops) {
  if (!c.on_l)
    throw std::invalid_argument("class " + c.name +
                                " is defined on enriched frames only");
  auto witness = closure_scan<LFrame, ClosureWitnessL>(
      universe, ops, [&](const LFrame& f) { return c.on_l(f); },
      [](const LFrame& f, const std::set<int>& seeds) {
        return generated_subframe(f, seeds);
      },
      [](const LFrame& f, const LFrame& g, const std::vector<int>& map) {
        return is_bounded_morphism(f, g, map);
      },
      [](const LFrame& a, const LFrame& b) { return disjoint_union({a, b}); },
      [n](const LFrame& f) { return canonical_extension_l(f, n).frame; });
  if (witness) return {false, std::move(witness)};
  return {};
}

namespace {

template <typename Witness, typename ToJson>
nlohmann::json witness_json(const Witness& w, ToJson frame_json) {
  nlohmann::json j;
  j["operation"] = closure_op_name(w.op);
  j["member"] = frame_json(w.frame_a);
  if (w.frame_b) j["second-member"] = frame_json(*w.frame_b);
  j["result"] = frame_json(w.result);
  if (!w.detail.empty()) {
    j[w.op == ClosureOp::GenSub ? "seeds" : "map"] = w.detail;
  }
  j["note"] = w.text;
  return j;
}

}  // namespace

nlohmann::json closure_witness_json(const ClosureWitnessL& w) {
  return witness_json(w, [](const LFrame& f) { return frame_to_json(f); });
}

nlohmann::json closure_witness_json(const ClosureWitnessLn& w) {
  return witness_json(w, [](const LnFrame& f) { return frame_to_json(f); });
}

// ---------------------------------------------------------------------------
// Worked counterexamples

BohReport reproduce_counterexample_boh(int n) {
  BohReport rep;
  rep.n = n;
  const Formula phi = parse("box(p \\/ ~p)", Signature::unary_box());

  if (n <= 1) {
    rep.counterexample_exists = false;
    rep.text =
        "n = 1: the formula is valid on every frame at the Boolean grain, so "
        "its model class is the lift of all frames and no counterexample "
        "exists.";
    return rep;
  }

  // two worlds u -> v, local grain n at u and 1 at v: the formula is valid
  // on the enrichment while the reduct has a nonempty relation
  LFrame base;
  base.sig = Signature::unary_box();
  base.worlds = {"u", "v"};
  base.relations["box"] = {{0, 1}};
  LnFrame witness = enrich_by_s(base, n, {n, 1});

  auto val = validate_ln(witness);
  if (!val.ok) throw std::logic_error("constructed witness is invalid");
  if (!valid(witness, phi).valid)
    throw std::logic_error("constructed witness does not satisfy the formula");

  rep.counterexample_exists = true;
  rep.witness = witness;
  rep.text =
      "n = " + std::to_string(n) +
      ": the two-world enrichment with an edge into a Boolean world satisfies "
      "box(p \\/ ~p) although its reduct has a nonempty relation; the model "
      "class of the formula is not the lift of the empty-relation class.";
  return rep;
}

nlohmann::json BohReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["counterexample-exists"] = counterexample_exists;
  if (witness) j["witness"] = frame_to_json(*witness);
  j["note"] = text;
  return j;
}

// ---------------------------------------------------------------------------
// Grain comparison

GodequivReport godequiv_check(const ClassPredicate& c,
                              const std::vector<LFrame>& universe, int n,
                              int max_depth, int num_vars, Budget budget) {
  if (!c.on_l)
    throw std::invalid_argument("class " + c.name +
                                " is defined on enriched frames only");
  if (universe.empty()) throw std::invalid_argument("empty universe");

  const auto enumeration =
      enumerate_formulas(universe.front().sig, max_depth, default_vars(num_vars));

  std::vector<size_t> members, nonmembers;
  for (size_t i = 0; i < universe.size(); ++i)
    (c.on_l(universe[i]) ? members : nonmembers).push_back(i);

  GodequivReport rep;
  nlohmann::json details;
  details["class"] = c.name;
  details["universe-size"] = universe.size();
  details["members"] = members.size();
  details["max-depth"] = max_depth;

  for (int grain : {1, n}) {
    // the valid formulas shared by all members, then the frames they admit
    std::vector<Formula> shared;
    for (const auto& phi : enumeration.formulas) {
      bool everywhere = true;
      for (size_t i : members)
        if (!valid_n(universe[i], grain, phi, budget).valid) {
          everywhere = false;
          break;
        }
      if (everywhere) shared.push_back(phi);
    }

    bool separated = true;
    nlohmann::json witnesses = nlohmann::json::object();
    for (size_t i : nonmembers) {
      std::optional<Formula> refuting;
      for (const auto& phi : shared)
        if (!valid_n(universe[i], grain, phi, budget).valid) {
          refuting = phi;
          break;
        }
      if (refuting) {
        witnesses["frame-" + std::to_string(i)] = print(*refuting);
      } else {
        separated = false;
        witnesses["frame-" + std::to_string(i)] = nullptr;
      }
    }
    const std::string key = "grain-" + std::to_string(grain);
    details[key]["separated"] = separated;
    details[key]["shared-formulas"] = shared.size();
    details[key]["witnesses"] = witnesses;
    if (grain == 1)
      rep.separated_boolean = separated;
    else
      rep.separated_n = separated;
  }

  rep.agree = rep.separated_boolean == rep.separated_n;
  rep.details = details;
  rep.text = std::string("at depth ") + std::to_string(max_depth) +
             " the class is " + (rep.separated_boolean ? "" : "not ") +
             "separated at grain 1 and " + (rep.separated_n ? "" : "not ") +
             "separated at grain " + std::to_string(n) +
             (rep.agree ? "; the grains agree"
                        : "; the grains disagree, inspect the candidate") +
             " (a finite universe refutes separations at this bound; it "
             "cannot certify definability).";
  return rep;
}

}  // namespace lmv
