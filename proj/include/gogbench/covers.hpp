#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gogbench/cosets.hpp"
#include "gogbench/gog.hpp"
#include "gogbench/homology.hpp"
#include "gogbench/report.hpp"

namespace gogbench {

/// A vertex of the total graph: a finite-index subgroup of the group of the
/// base vertex it lies over. Cyclic base vertices carry CosetTable::cyclic(d).
struct TotalVertex {
  int over = 0;
  CosetTable table;
  std::string name;

  int index() const { return table.size(); }
};

/// An oriented total edge over the base edge `over`. Like base edges they come
/// in pairs 2k, 2k+1. `anchor` is a coset of the terminus table lying in the
/// cycle of word(over) that this edge realizes. The two orientations are glued
/// with their anchors aligned: anchor * w^j on one side meets
/// anchor(reverse) * rev(w)^j on the other.
struct TotalEdge {
  int over = 0;
  int origin = 0;
  int terminus = 0;
  int reverse = 0;
  int anchor = 0;
};

/// An elevation at a total vertex that no total edge realizes.
struct HangingSlot {
  int vertex = 0;
  int base_edge = 0;  // base edge whose terminus is the vertex's base vertex
  int coset = 0;      // least coset of the cycle
  int degree = 0;
  bool cyclic_side = false;

  friend bool operator==(const HangingSlot&, const HangingSlot&) = default;
};

struct PrecoverMorphism {
  std::shared_ptr<const GraphOfGroups> base;
  std::vector<TotalVertex> vertices;
  std::vector<TotalEdge> edges;
  int base_vertex = 0;

  int add_vertex(int over, CosetTable table, std::string name = {});
  /// Adds a total edge over base edge `over` from `origin` to `terminus` and
  /// its reverse. `anchor_fwd` is at the terminus, `anchor_bwd` at the origin.
  int add_edge_pair(int over, int origin, int terminus, int anchor_fwd, int anchor_bwd);

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool is_cyclic(int v) const { return base->vertex(vertices.at(v).over).kind == VertexKind::Cyclic; }
  /// Total edges with terminus v.
  std::vector<int> incoming(int v) const;
  /// Word of the base edge realized by total edge e (in the terminus basis).
  const Word& edge_word(int e) const { return base->edge(edges.at(e).over).word; }
  /// Cycle length of the anchor under the edge word.
  int edge_degree(int e) const;
};

/// The stored name, or "<base vertex>.<index>" when unnamed.
std::string vertex_label(const PrecoverMorphism& m, int v);

PrecoverMorphism identity_morphism(std::shared_ptr<const GraphOfGroups> base);

Report validate_precover(const PrecoverMorphism& m);
Report validate_cover(const PrecoverMorphism& m);
std::vector<HangingSlot> hanging_slots(const PrecoverMorphism& m);

/// Per base vertex, the summed index of the total vertices above it.
std::vector<long> index_sums(const PrecoverMorphism& m);
/// Throws InvalidInput on disconnected totals or unequal sums.
long degree(const PrecoverMorphism& m);
long predegree(const PrecoverMorphism& m);

/// The total space as a graph of groups: vertex groups in their Schreier
/// bases, edge words rewritten from the anchored elevation representatives.
/// Vertex and edge numbering follow the morphism.
GraphOfGroups total_graph(const PrecoverMorphism& m);
bool total_connected(const PrecoverMorphism& m);

PrecoverMorphism disjoint_union(const std::vector<PrecoverMorphism>& ms);

struct SlotRef {
  int component = 0;
  int vertex = 0;  // within the component
  int base_edge = 0;
  int coset = 0;
};

/// Disjoint union with the matched slot pairs fused into edges.
PrecoverMorphism splice(const std::vector<PrecoverMorphism>& ms,
                        const std::vector<std::pair<SlotRef, SlotRef>>& matches);
/// Single-component form: fuses pairs of hanging slots of m.
PrecoverMorphism splice_slots(const PrecoverMorphism& m,
                              const std::vector<std::pair<HangingSlot, HangingSlot>>& matches);

/// Edges in `to_second` (total edges with terminus C) move to a new vertex
/// appended at the end; the rest stay on C.
PrecoverMorphism split_cyclic(const PrecoverMorphism& m, int c, const std::vector<int>& to_second);
/// Fuses c2 into c1; vertex c2 is removed (later indices shift down by one).
PrecoverMorphism merge_cyclic(const PrecoverMorphism& m, int c1, int c2);
/// Removes the edge pair containing e, which must join a cyclic and a
/// non-cyclic vertex.
PrecoverMorphism detach_edge(const PrecoverMorphism& m, int e);
/// Drops vertices and their incident edges. `mapping` (optional) receives the
/// new index of every old vertex, or -1.
PrecoverMorphism remove_vertices(const PrecoverMorphism& m, const std::vector<int>& vs,
                                 std::vector<int>* mapping = nullptr);

/// Isomorphism over the identity of the base: vertex and edge bijections with
/// coset relabellings that respect the action and the edge gluings.
bool isomorphic(const PrecoverMorphism& a, const PrecoverMorphism& b);

/// Covers of degree 1..max_index in increasing degree: every multiset of
/// conjugacy-class tables per base vertex, every degree-preserving matching of
/// elevations per edge pair. Only connected covers are yielded. The callback
/// returns false to stop. Returns the number yielded.
long for_each_cover(std::shared_ptr<const GraphOfGroups> base, int max_index,
                    const std::function<bool(const PrecoverMorphism&)>& fn);
/// Throws SearchLimit when more than `cap` covers exist.
std::vector<PrecoverMorphism> enumerate_covers(std::shared_ptr<const GraphOfGroups> base,
                                               int max_index, long cap);

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompleteOptions {
  int bound = 4;             // extra degree allowed above the predegree
  long node_budget = 200'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Bounded search for a cover containing m: new vertices come from the
/// conjugacy-class tables of each base vertex group, slots are matched to
/// existing slots first. Returns nullopt when nothing is found in bounds.
std::optional<PrecoverMorphism> complete(const PrecoverMorphism& m, const CompleteOptions& options = {});

struct TorsionCertificate {
  AbelianGroup h1;          // H_1 of the piece
  Vec c1, c2;               // boundary classes in h1 coordinates
  AbelianGroup quotient;    // h1 / <c1, c2>
  Vec witness;              // element of h1 of order p^k
  int k = 0;
  AbelianGroup reduced;     // h1 / (<c1, c2> + p^k h1), where the witness keeps order p^k
};

struct TorsionPiece {
  PrecoverMorphism piece;
  long prime = 2;
  int c1 = 0, c2 = 0;
  int source_vertex = 0;  // cyclic vertex of the source cover that was split
  int single_edge = 0;    // source total edge moved to c2
  TorsionCertificate certificate;
};

/// Witness search for a cyclic direct factor of order p^k of A whose
/// complement contains c1 and c2. Enumerates at most `cap` elements.
std::optional<TorsionCertificate> torsion_certificate(const AbelianGroup& a, const Vec& c1,
                                                      const Vec& c2, long p, long cap = 4096);

struct TorsionSearch {
  long prime = 2;
  int max_index = 4;
  long cap = 10'000;  // covers scanned
  /// When set, only cyclic vertices over this base vertex are split, and the
  /// single edge must lie over `single_base_edge` (or its reverse).
  std::optional<int> base_cyclic_vertex;
  std::optional<int> single_base_edge;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

std::optional<TorsionPiece> find_torsion_piece(std::shared_ptr<const GraphOfGroups> base,
                                               const TorsionSearch& search);
/// Recomputes the certificate from scratch.
Report check_torsion_piece(const TorsionPiece& piece);

struct Chain {
  PrecoverMorphism morphism;
  int first_c2 = 0;  // free boundary of the first copy
  int last_c1 = 0;   // free boundary of the last copy
  std::vector<int> copy_offset;  // first vertex of each copy before merging
};

Chain chain(const TorsionPiece& piece, int copies);

struct LiftResult {
  bool in_subgroup = false;
  /// Index of the edge step where the lift left the precover, or the number
  /// of edges when the lift completed without closing up.
  int exit_step = -1;
  int end_vertex = 0;
  int end_coset = 0;
  /// The lifted loop in the total graph (set when the lift completed).
  std::optional<GogWord> lifted;
};

LiftResult lift_word(const PrecoverMorphism& m, const GogWord& w);

struct TowerBounds {
  int cover_index = 4;         // enumerate_covers bound for L_n
  int piece_index = 4;         // find_torsion_piece bound
  long piece_cap = 10'000;
  int complete_bound = 8;
  long complete_budget = 200'000;
  int word_length = 6;         // GogWord enumeration length
  double budget_seconds = 300;
};

struct TowerStage {
  int step = 0;
  long prime = 0;
  long degree = 0;
  long piece_predegree = 0;   // [G_0 : H_p] for the piece introduced here
  int alpha = 0, beta = 0;
  std::string excluded_word;
  bool excluded = false;
  bool distance_ok = false;
  bool cut_ok = false;
  std::vector<std::string> notes;
};

struct TowerReport {
  TowerLedger ledger;
  std::vector<TowerStage> stages;
  int completed_steps = 0;
  std::string status = "ok";  // or "NotFound: <stage tag>"
  std::optional<PrecoverMorphism> last_cover;
  Report check;
};

TowerReport build_tower(std::shared_ptr<const GraphOfGroups> base, const std::vector<long>& primes,
                        int steps, const TowerBounds& bounds);

std::string tower_csv(const TowerReport& report);

}  // namespace gogbench
