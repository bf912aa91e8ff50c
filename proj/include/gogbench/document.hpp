#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gogbench/covers.hpp"
#include "gogbench/gog.hpp"

namespace gogbench {

inline constexpr int kFormatVersion = 1;

enum class DocKind { Gog, Precover, TorsionPiece, Tower };

struct TowerConfig {
  std::vector<long> primes{2};
  int steps = 1;
  TowerBounds bounds;
};

/// One workbench file: a graph of groups plus, depending on the kind, a
/// morphism over it, a torsion piece, or a tower configuration.
struct Document {
  DocKind kind = DocKind::Gog;
  std::shared_ptr<const GraphOfGroups> gog;
  std::optional<PrecoverMorphism> morphism;  // Precover
  bool cover = false;                        // declared as "cover" rather than "precover"
  std::optional<TorsionPiece> piece;         // TorsionPiece
  std::optional<TowerConfig> tower;          // Tower
};

/// Throws InvalidInput with a field path on schema violations.
Document parse_document(const std::string& text);
Document load_document(const std::string& path);
std::string dump_document(const Document& doc);
void save_document(const Document& doc, const std::string& path);

Document gog_document(std::shared_ptr<const GraphOfGroups> g);
Document morphism_document(const PrecoverMorphism& m, bool cover);
Document piece_document(const TorsionPiece& p);

}  // namespace gogbench
