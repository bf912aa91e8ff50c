#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "gogbench/covers.hpp"

namespace gogbench {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  bool passed() const { return Clock::now() > end; }
};

// An edge of a sub-object leaving it: the slot it fills outside and inside.
struct External {
  HangingSlot outside;
  int inside_vertex;
  int inside_base_edge;
  int inside_coset;
};

int slot_coset(const PrecoverMorphism& m, int e) {
  const auto& x = m.edges[e];
  auto cyc = coset_cycle(m.vertices[x.terminus].table, m.edge_word(e), x.anchor);
  return *std::min_element(cyc.begin(), cyc.end());
}

std::vector<External> externals(const PrecoverMorphism& m, const std::set<int>& inside) {
  std::vector<External> out;
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& x = m.edges[e];
    // e points into the outside vertex; its reverse into the inside one.
    if (inside.count(x.terminus) || !inside.count(x.origin)) continue;
    out.push_back({HangingSlot{x.terminus, x.over, slot_coset(m, e), 0, false}, x.origin,
                   m.edges[e ^ 1].over, slot_coset(m, e ^ 1)});
  }
  return out;
}

// Replaces the sub-object `inside` of m by `replacement`, sending each inside
// vertex v to where[v] in the replacement.
PrecoverMorphism replace(const PrecoverMorphism& m, const std::set<int>& inside,
                         const PrecoverMorphism& replacement, const std::map<int, int>& where) {
  auto ext = externals(m, inside);
  std::vector<int> map;
  PrecoverMorphism rest = remove_vertices(m, std::vector<int>(inside.begin(), inside.end()), &map);
  const int offset = rest.num_vertices();
  PrecoverMorphism u = disjoint_union({rest, replacement});
  std::vector<std::pair<HangingSlot, HangingSlot>> matches;
  for (const auto& x : ext) {
    HangingSlot out = x.outside;
    out.vertex = map[out.vertex];
    HangingSlot in{offset + where.at(x.inside_vertex), x.inside_base_edge, x.inside_coset, 0, false};
    matches.emplace_back(out, in);
  }
  return splice_slots(u, matches);
}

// Copies of p chained by matching the slot `tail` of copy i with `head` of
// copy i+1. Vertex v of the first copy keeps index v; copy i is offset by i*n.
PrecoverMorphism necklace(const PrecoverMorphism& p, int copies, const HangingSlot& head, const HangingSlot& tail) {
  std::vector<PrecoverMorphism> parts(copies, p);
  PrecoverMorphism u = disjoint_union(parts);
  const int n = p.num_vertices();
  std::vector<std::pair<HangingSlot, HangingSlot>> matches;
  for (int i = 0; i + 1 < copies; ++i) {
    HangingSlot t = tail, h = head;
    t.vertex += i * n;
    h.vertex += (i + 1) * n;
    matches.emplace_back(t, h);
  }
  return splice_slots(u, matches);
}

mpq_class frac(long a, long b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

mpq_class pow2_inv(int k) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return mpq_class(1, d);
}

struct Choice {
  PrecoverMorphism cover;
  int vertex = -1;      // v^n
  int edge = -1;        // total edge over e_t into v^n
  int c_tor = -1;
  bool excluded = false, distance_ok = false, cut_ok = false;
  int score() const { return (excluded ? 4 : 0) + (distance_ok ? 2 : 0) + (cut_ok ? 1 : 0); }
};

}  // namespace

TowerReport build_tower(std::shared_ptr<const GraphOfGroups> base, const std::vector<long>& primes, int steps,
                        const TowerBounds& bounds) {
  TowerReport rep;
  rep.ledger = make_ledger(primes);
  Deadline deadline{Clock::now() + std::chrono::milliseconds(static_cast<long>(bounds.budget_seconds * 1000))};
  auto vr = validate(*base);
  if (!vr.ok()) throw InvalidInput("build_tower: " + vr.str());
  if (steps > static_cast<int>(primes.size()) && steps > 0)
    throw InvalidInput("build_tower: one prime per step is required");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw InvalidInput("build_tower: " + std::to_string(primes[i]) + " is not prime");
    for (std::size_t j = 0; j < i; ++j)
      if (primes[j] == primes[i]) throw InvalidInput("build_tower: primes must be distinct");
  }

  ledger_update(rep.ledger, 0, 0, 1, h1(*base), 1, "base");
  auto words = enumerate_gog_words(*base, bounds.word_length, std::max(steps, 1));

  std::vector<PrecoverMorphism> stages;  // stage n is a cover of the total graph of stage n-1
  std::shared_ptr<const GraphOfGroups> B = base;
  long degree0 = 1;  // [G_0 : G_{n-1}]
  int designated = -1;  // edge of B detached in the previous-stage copies

  auto fail = [&](int step, const std::string& tag) {
    rep.status = "NotFound: step " + std::to_string(step) + ": " + tag;
    return rep;
  };

  for (int n = 1; n <= steps; ++n) {
    TowerStage st;
    st.step = n;
    st.prime = primes[n - 1];
    if (deadline.passed()) return fail(n, "budget exhausted");

    // Lift g_n to B through the stages built so far.
    std::optional<GogWord> target;
    bool already_excluded = false;
    if (static_cast<int>(words.size()) >= n) {
      GogWord w = words[n - 1];
      st.excluded_word = w.str(*base);
      for (const auto& s : stages) {
        auto r = lift_word(s, w);
        if (!r.in_subgroup) {
          already_excluded = true;
          break;
        }
        w = *r.lifted;
      }
      if (!already_excluded) target = w;
    } else {
      st.notes.push_back("no GogWord within the length bound");
    }

    // (2) torsion piece over B.
    TorsionSearch ts;
    ts.prime = st.prime;
    ts.max_index = bounds.piece_index;
    ts.cap = bounds.piece_cap;
    ts.deadline = deadline.end;
    auto piece = find_torsion_piece(B, ts);
    if (!piece && deadline.passed()) return fail(n, "budget exhausted during torsion piece search");
    if (!piece) return fail(n, "torsion piece (p=" + std::to_string(st.prime) + ")");
    const int c_p = piece->piece.vertices[piece->c1].over;
    const int e_p = piece->piece.edges[piece->single_edge].over;  // into c_p
    const int u_p = B->edge(e_p).origin;
    if (B->vertex(u_p).kind == VertexKind::Cyclic) return fail(n, "torsion piece boundary not adjacent to a non-cyclic vertex");
    const long piece_pre = predegree(piece->piece);
    st.piece_predegree = degree0 * piece_pre;

    // Candidate base edges e_t: cyclic -> u_p, other than rev(e_p).
    std::vector<int> e_ts;
    for (int e : B->incoming(u_p))
      if (e != B->edge(e_p).reverse && B->vertex(B->edge(e).origin).kind == VertexKind::Cyclic) e_ts.push_back(e);
    std::stable_sort(e_ts.begin(), e_ts.end(),
                     [&](int a, int b) { return (B->edge(a).origin == c_p) < (B->edge(b).origin == c_p); });
    if (e_ts.empty()) return fail(n, "no cyclic edge at the piece's neighbour to detach");

    // (1) L_n: a cover of B with a far vertex v^n over u_p.
    std::optional<Choice> best;
    long scanned = 0;
    const int need = target ? static_cast<int>(target->edges.size()) + 1 : 0;
    for_each_cover(B, bounds.cover_index, [&](const PrecoverMorphism& cover) {
      if (++scanned > bounds.piece_cap || deadline.passed()) return false;
      GraphOfGroups lt = total_graph(cover);
      for (int b = 0; b < cover.num_vertices(); ++b) {
        if (cover.vertices[b].over != B->base()) continue;
        PrecoverMorphism L = cover;
        L.base_vertex = b;
        bool excl = !target || !lift_word(L, *target).in_subgroup;
        auto dist = distances(lt, b);
        for (int e_t : e_ts)
          for (int e = 0; e < L.num_edges(); ++e) {
            if (L.edges[e].over != e_t) continue;
            Choice c{L, L.edges[e].terminus, e, L.edges[e].origin, excl, dist[L.edges[e].terminus] > need, false};
            std::vector<int> cut{c.c_tor};
            for (int f = 0; f < L.num_edges(); ++f)
              if (L.edges[f].origin == c.vertex && L.edges[f].over == e_p &&
                  std::find(cut.begin(), cut.end(), L.edges[f].terminus) == cut.end()) {
                cut.push_back(L.edges[f].terminus);
                break;
              }
            c.cut_ok = !disconnects(lt, cut);
            if (!best || c.score() > best->score()) best = c;
            if (best->score() == 7) return false;
          }
      }
      return true;
    });
    if (!best) return fail(n, "no cover L_n with a detachable edge");
    st.excluded = already_excluded || best->excluded;
    st.distance_ok = best->distance_ok;
    st.cut_ok = best->cut_ok;
    if (!best->excluded && !already_excluded) st.notes.push_back("exclusion of g_n failed within cover_index");
    if (!best->distance_ok) st.notes.push_back("distance condition failed within cover_index");
    if (!best->cut_ok) st.notes.push_back("{C_tor, C_prev} is a cut set");

    const PrecoverMorphism& L = best->cover;
    const int e_t = L.edges[best->edge].over;
    const int d_tor = L.edge_degree(best->edge);
    const int d_p = piece->piece.vertices[piece->c1].index();

    // (3) connector over u_p.
    Report pr;
    Pair pair = induced_pair(*B, u_p, &pr);
    auto inc = B->incoming(u_p);
    std::vector<std::optional<int>> targets(inc.size());
    for (std::size_t i = 0; i < inc.size(); ++i) {
      if (inc[i] == e_t) targets[i] = d_tor;
      if (inc[i] == B->edge(e_p).reverse) targets[i] = d_p;
    }
    PrescribeOptions po;
    po.require_unit_constant = true;
    auto conn = prescribe_degrees(pair, targets, po);
    if (!conn) return fail(n, "connector (prescribe_degrees)");

    // (4) assemble with one piece and one previous-stage copy, then complete.
    PrecoverMorphism Lp = detach_edge(L, best->edge);
    PrecoverMorphism X;
    X.base = B;
    X.add_vertex(u_p, conn->table);
    std::vector<PrecoverMorphism> parts{Lp, X, piece->piece};
    std::optional<PrecoverMorphism> prev_copy;
    HangingSlot prev_head, prev_tail;
    if (designated >= 0) {
      prev_copy = detach_edge(identity_morphism(B), designated);
      const auto& de = B->edge(designated);
      // head: slot at the non-cyclic end, tail: slot at the cyclic end.
      int nc = B->vertex(de.terminus).kind == VertexKind::Cyclic ? de.origin : de.terminus;
      for (const auto& s : hanging_slots(*prev_copy)) (s.vertex == nc ? prev_head : prev_tail) = s;
      parts.push_back(*prev_copy);
    }
    const int off_x = Lp.num_vertices();
    const int off_h = off_x + 1;
    const int off_g = off_h + piece->piece.num_vertices();
    PrecoverMorphism U = disjoint_union(parts);
    const int x = off_x;
    // Slots at the connector for e_t and rev(e_p).
    auto slot_at = [&](const PrecoverMorphism& m, int v, int be) -> std::optional<HangingSlot> {
      for (const auto& s : hanging_slots(m))
        if (s.vertex == v && s.base_edge == be) return s;
      return std::nullopt;
    };
    auto s_ctor = slot_at(U, best->c_tor, B->edge(e_t).reverse);
    auto s_xt = slot_at(U, x, e_t);
    auto s_c1 = slot_at(U, off_h + piece->c1, e_p);
    auto s_xp = slot_at(U, x, B->edge(e_p).reverse);
    if (!s_ctor || !s_xt || !s_c1 || !s_xp || s_ctor->degree != s_xt->degree || s_c1->degree != s_xp->degree)
      return fail(n, "connector slots do not match");
    U = splice_slots(U, {{*s_xt, *s_ctor}, {*s_xp, *s_c1}});
    CompleteOptions co;
    co.bound = bounds.complete_bound;
    co.node_budget = bounds.complete_budget;
    co.deadline = deadline.end;
    auto K = complete(U, co);
    if (!K) return fail(n, deadline.passed() ? "budget exhausted during completion" : "completion");

    std::set<int> h_set, g_set;
    for (int v = 0; v < piece->piece.num_vertices(); ++v) h_set.insert(off_h + v);
    if (prev_copy)
      for (int v = 0; v < prev_copy->num_vertices(); ++v) g_set.insert(off_g + v);
    // Predegree of everything except the piece and the previous-stage copy.
    std::vector<int> drop(h_set.begin(), h_set.end());
    drop.insert(drop.end(), g_set.begin(), g_set.end());
    const long p_rest = predegree(remove_vertices(*K, drop));

    // alpha, beta: minimal alpha, then beta, meeting both inequalities.
    long alpha = 0, beta = prev_copy ? 0 : 1;
    for (long a = 1; a <= 100000 && !alpha; ++a) {
      if (!prev_copy) {
        if (frac(a * piece_pre, a * piece_pre + p_rest) >= pow2_inv(n + 1)) alpha = a;
        continue;
      }
      for (long b = 1; b <= 100000; ++b) {
        long total = a * piece_pre + b + p_rest;
        if (frac(b, total) < 1 - pow2_inv(n)) continue;
        if (frac(a * piece_pre, total) >= pow2_inv(n + 1)) {
          alpha = a;
          beta = b;
        }
        break;
      }
    }
    if (!alpha) return fail(n, "no alpha/beta within limits");
    st.alpha = static_cast<int>(alpha);
    st.beta = prev_copy ? static_cast<int>(beta) : 0;

    // Splice alpha chained pieces (and beta previous-stage copies) in place.
    Chain ch = chain(*piece, static_cast<int>(alpha));
    std::map<int, int> where_h{{off_h + piece->c1, ch.last_c1}, {off_h + piece->c2, ch.first_c2}};
    std::map<int, int> where_g;
    PrecoverMorphism repl = ch.morphism;
    std::set<int> inside = h_set;
    if (prev_copy) {
      PrecoverMorphism neck = necklace(*prev_copy, static_cast<int>(beta), prev_head, prev_tail);
      const int shift = repl.num_vertices();
      repl = disjoint_union({repl, neck});
      where_g[off_g + prev_head.vertex] = shift + prev_head.vertex;
      where_g[off_g + prev_tail.vertex] = shift + static_cast<int>(beta - 1) * prev_copy->num_vertices() + prev_tail.vertex;
      inside.insert(g_set.begin(), g_set.end());
    }
    std::map<int, int> where = where_h;
    where.insert(where_g.begin(), where_g.end());
    PrecoverMorphism G = replace(*K, inside, repl, where);
    auto cr = validate_cover(G);
    if (!cr.ok()) return fail(n, "assembled morphism is not a cover: " + cr.str());
    const long deg_b = degree(G);
    st.degree = degree0 * deg_b;

    // Exclusion check on the assembled cover.
    if (target) st.excluded = !lift_word(G, *target).in_subgroup;

    GraphOfGroups total = total_graph(G);
    AbelianGroup h = h1_invariants(total);
    ledger_update(rep.ledger, n, st.prime, st.degree, h, st.piece_predegree, "ok");

    // The connector-to-C_tor edge is detached in the next stage's copies.
    designated = -1;
    {
      // The untouched part keeps its relative order.
      const std::set<int>& inside_sorted = inside;
      int xi = -1, ci = -1, count = 0;
      for (int v = 0; v < K->num_vertices(); ++v) {
        if (inside_sorted.count(v)) continue;
        if (v == x) xi = count;
        if (v == best->c_tor) ci = count;
        ++count;
      }
      for (int e = 0; e < G.num_edges(); e += 2)
        if ((G.edges[e].origin == xi && G.edges[e].terminus == ci) ||
            (G.edges[e].origin == ci && G.edges[e].terminus == xi)) {
          designated = e;
          break;
        }
    }
    stages.push_back(G);
    rep.stages.push_back(st);
    rep.completed_steps = n;
    degree0 = st.degree;
    B = std::make_shared<const GraphOfGroups>(std::move(total));
    rep.last_cover = G;
  }
  rep.check = ledger_check(rep.ledger);
  return rep;
}

std::string tower_csv(const TowerReport& report) { return ledger_csv(report.ledger); }

}  // namespace gogbench
