#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgtype {

// In-memory type system: entities, types, surface labels, instance-of and
// subclass-of edges, with per-type entity statistics computed eagerly.
// Immutable after load; any number of concurrent readers is fine.
//
// File format (UTF-8, tab separated, one record per line, `#` comments):
//   <type-id>    TYPE        <display name, ignored>
//   <entity-id>  ENTITY      <primary surface label>
//   <entity-id>  LABEL       <additional surface label>
//   <entity-id>  TYPE_OF     <type-id>
//   <type-id>    SUBCLASS_OF <type-id>
// Every id referenced by an edge must be declared; entity and type id
// namespaces are disjoint; every entity carries at least one label and one
// type. Entities and types are indexed in lexicographic id order.
class TypeGraph {
 public:
  static TypeGraph load(const std::filesystem::path& path);
  static TypeGraph parse(std::istream& in, const std::string& source_name);

  std::size_t entity_total() const { return entity_ids_.size(); }  // the constant Z
  std::size_t type_total() const { return type_ids_.size(); }

  bool has_entity(std::string_view id) const { return entity_index(id) >= 0; }
  bool has_type(std::string_view id) const { return type_index(id) >= 0; }
  int entity_index(std::string_view id) const;  // -1 when absent
  int type_index(std::string_view id) const;
  const std::string& entity_id(std::size_t idx) const { return entity_ids_[idx]; }
  const std::string& type_id(std::size_t idx) const { return type_ids_[idx]; }

  // Number of entities directly instance-of the type.
  std::size_t entity_count(std::string_view type_id) const;
  std::size_t entity_count_at(std::size_t type_idx) const { return entity_count_[type_idx]; }

  // Undirected BFS hop count over subclass-of edges; nullopt when unreachable.
  std::optional<int> distance(std::string_view a, std::string_view b) const;
  std::optional<int> distance_at(std::size_t a, std::size_t b) const;

  // Direct types only, no closure over the subclass hierarchy.
  std::vector<std::string> types_of(std::string_view entity_id) const;
  const std::vector<int>& types_of_at(std::size_t entity_idx) const {
    return instance_of_[entity_idx];
  }

  const std::vector<std::string>& labels_at(std::size_t entity_idx) const {
    return labels_[entity_idx];
  }
  // Entities with a label whose normalized form equals `normalized`.
  const std::vector<int>* label_candidates(const std::string& normalized) const;

  const std::vector<std::pair<int, int>>& subclass_edges() const { return subclass_edges_; }
  const std::vector<int>& subclass_neighbors(std::size_t type_idx) const {
    return adjacency_[type_idx];
  }

  // Canonical re-serialization in the triple TSV format; parse(serialize(g))
  // reproduces g exactly.
  void serialize(std::ostream& out) const;

  friend bool operator==(const TypeGraph& a, const TypeGraph& b);

 private:
  TypeGraph() = default;
  void build_stats();

  std::vector<std::string> entity_ids_;  // lexicographic
  std::vector<std::string> type_ids_;    // lexicographic
  std::unordered_map<std::string, int> entity_lookup_;
  std::unordered_map<std::string, int> type_lookup_;
  std::vector<std::vector<std::string>> labels_;   // per entity, declaration order
  std::vector<std::vector<int>> instance_of_;      // per entity, sorted type indices
  std::vector<std::pair<int, int>> subclass_edges_;  // directed, sorted, unique
  std::vector<std::vector<int>> adjacency_;          // undirected view of subclass edges
  std::vector<std::size_t> entity_count_;            // per type
  std::unordered_map<std::string, std::vector<int>> label_lookup_;
};

}  // namespace kgtype
