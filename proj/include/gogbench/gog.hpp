#pragma once

#include <string>
#include <vector>

#include "gogbench/cosets.hpp"
#include "gogbench/report.hpp"
#include "gogbench/words.hpp"

namespace gogbench {

enum class VertexKind { Cyclic, NonCyclic };

struct GogVertex {
  std::string name;
  int rank = 1;
  VertexKind kind = VertexKind::NonCyclic;
};

/// An oriented edge. Edges come in pairs: 2k is the forward orientation and
/// 2k+1 its reverse. `word` is the image of the edge-group generator in the
/// basis of the terminus.
struct GogEdge {
  std::string name;
  int origin = 0;
  int terminus = 0;
  int reverse = 0;
  Word word;
};

/// Graph of groups with free vertex groups and infinite cyclic edge groups.
///
/// Conjugation convention: for an oriented edge e, e^-1 word(rev e) e = word(e).
class GraphOfGroups {
 public:
  int add_vertex(std::string name, int rank, VertexKind kind);
  /// Adds the pair e: u -> v (word_fwd in v's basis) and its reverse v -> u
  /// (word_bwd in u's basis). Returns the index of the forward edge.
  int add_edge_pair(std::string name, int u, int v, Word word_fwd, Word word_bwd);

  const std::vector<GogVertex>& vertices() const { return vertices_; }
  const std::vector<GogEdge>& edges() const { return edges_; }
  const GogVertex& vertex(int v) const { return vertices_.at(v); }
  const GogEdge& edge(int e) const { return edges_.at(e); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_edge_pairs() const { return num_edges() / 2; }

  /// -1 when absent.
  int vertex_index(const std::string& name) const;
  int edge_index(const std::string& name) const;

  /// Oriented edges with terminus v, in index order.
  std::vector<int> incoming(int v) const;
  /// Oriented edges with origin v, in index order.
  std::vector<int> outgoing(int v) const;

  int base() const { return base_; }
  void set_base(int v) { base_ = v; }

 private:
  std::vector<GogVertex> vertices_;
  std::vector<GogEdge> edges_;
  int base_ = 0;
};

Report validate(const GraphOfGroups& g);

/// Whether removing the given vertices disconnects the remaining ones.
bool disconnects(const GraphOfGroups& g, const std::vector<int>& removed);
bool is_connected(const GraphOfGroups& g);
/// Edge-count distance from `from` to every vertex (-1 when unreachable).
std::vector<int> distances(const GraphOfGroups& g, int from);

/// Peripheral classes of the incident edge words at v, ordered by incoming
/// edge index. The report lists duplicate classes and degenerate vertices.
Pair induced_pair(const GraphOfGroups& g, int v, Report* report);
/// Throwing variant.
Pair induced_pair(const GraphOfGroups& g, int v);

Report check_normal_form(const GraphOfGroups& g);

long euler_characteristic(const GraphOfGroups& g);

struct GeneratorOrigin {
  enum class Kind { VertexBasis, StableLetter };
  Kind kind = Kind::VertexBasis;
  int vertex = -1;       // VertexBasis
  int basis_index = 0;   // 1-based, VertexBasis
  int edge_pair = -1;    // StableLetter
  std::string label;
};

struct AbelianizedPresentation {
  std::vector<GeneratorOrigin> roster;
  std::vector<std::vector<long>> relations;  // one row per edge pair
  std::vector<int> vertex_offset;            // first column of each vertex block
};

/// Breadth-first spanning tree from the base vertex, incident edge pairs
/// explored in name order. Returns tree membership per edge pair.
std::vector<bool> spanning_tree(const GraphOfGroups& g);

AbelianizedPresentation abelianized_presentation(const GraphOfGroups& g);

/// A loop at `base`: vertex_words[0] e_1 vertex_words[1] ... e_k vertex_words[k],
/// where vertex_words[i] lies in the group of the terminus of e_i.
struct GogWord {
  int base = 0;
  std::vector<Word> vertex_words;
  std::vector<int> edges;

  bool is_trivial() const { return edges.empty() && vertex_words.front().is_identity(); }
  /// Letters plus edges.
  long total_length() const;
  std::string str(const GraphOfGroups& g) const;
};

Report validate_word(const GraphOfGroups& g, const GogWord& w);
/// Edge count of the stored path. Throws InvalidInput on endpoint mismatch.
int word_length(const GraphOfGroups& g, const GogWord& w);
/// No subpath e u rev(e) with u in the cyclic subgroup generated by word(e).
bool is_locally_reduced(const GraphOfGroups& g, const GogWord& w);

/// Whether u lies in the cyclic subgroup generated by w (w non-trivial).
bool in_cyclic_subgroup(const Word& u, const Word& w);

/// Non-trivial locally reduced loops at the base vertex, ordered by total
/// length then lexicographically on tokens (letters by value, then edges by
/// index, letters before edges). Stops after `limit` words.
std::vector<GogWord> enumerate_gog_words(const GraphOfGroups& g, int max_total_length, long limit);

}  // namespace gogbench
