#include "kgtype/type_graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kgtype/errors.hpp"
#include "kgtype/text.hpp"

namespace kgtype {

namespace {

struct RawRecord {
  std::size_t line;
  std::string subject;
  std::string predicate;
  std::string object;
};

std::vector<RawRecord> read_records(std::istream& in, const std::string& source) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(source, lineno,
                       "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(source, lineno, "empty subject field");
    records.push_back(RawRecord{lineno, fields[0], fields[1], fields[2]});
  }
  return records;
}

}  // namespace

TypeGraph TypeGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open type system file: " + path.string());
  return parse(in, path.string());
}

TypeGraph TypeGraph::parse(std::istream& in, const std::string& source) {
  const auto records = read_records(in, source);

  TypeGraph g;
  // Pass 1: declarations. Ids are indexed in lexicographic order so that a
  // graph's indices depend only on its content.
  std::unordered_map<std::string, std::pair<std::string, std::size_t>> entity_decl;
  std::unordered_map<std::string, std::size_t> type_decl;
  for (const auto& r : records) {
    if (r.predicate == "ENTITY") {
      if (r.object.empty()) throw ParseError(source, r.line, "entity declared without a label");
      if (!entity_decl.emplace(r.subject, std::make_pair(r.object, r.line)).second)
        throw ParseError(source, r.line, "duplicate entity id: " + r.subject);
    } else if (r.predicate == "TYPE") {
      if (!type_decl.emplace(r.subject, r.line).second)
        throw ParseError(source, r.line, "duplicate type id: " + r.subject);
    }
  }
  for (const auto& [id, decl] : type_decl) {
    if (entity_decl.count(id))
      throw ParseError(source, decl, "id declared as both entity and type: " + id);
  }

  g.entity_ids_.reserve(entity_decl.size());
  for (const auto& [id, _] : entity_decl) g.entity_ids_.push_back(id);
  std::sort(g.entity_ids_.begin(), g.entity_ids_.end());
  g.type_ids_.reserve(type_decl.size());
  for (const auto& [id, _] : type_decl) g.type_ids_.push_back(id);
  std::sort(g.type_ids_.begin(), g.type_ids_.end());
  for (std::size_t i = 0; i < g.entity_ids_.size(); ++i) g.entity_lookup_[g.entity_ids_[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < g.type_ids_.size(); ++i) g.type_lookup_[g.type_ids_[i]] = static_cast<int>(i);

  g.labels_.resize(g.entity_ids_.size());
  g.instance_of_.resize(g.entity_ids_.size());
  for (std::size_t i = 0; i < g.entity_ids_.size(); ++i)
    g.labels_[i].push_back(entity_decl[g.entity_ids_[i]].first);

  // Pass 2: labels and edges.
  auto entity_at = [&](const std::string& id, std::size_t line) {
    int idx = g.entity_index(id);
    if (idx < 0) throw ParseError(source, line, "reference to undeclared entity: " + id);
    return static_cast<std::size_t>(idx);
  };
  auto type_at = [&](const std::string& id, std::size_t line) {
    int idx = g.type_index(id);
    if (idx < 0) throw ParseError(source, line, "reference to undeclared type: " + id);
    return static_cast<std::size_t>(idx);
  };

  std::vector<std::pair<int, int>> edges;
  for (const auto& r : records) {
    if (r.predicate == "ENTITY" || r.predicate == "TYPE") continue;
    if (r.predicate == "LABEL") {
      if (r.object.empty()) throw ParseError(source, r.line, "empty label");
      auto& labels = g.labels_[entity_at(r.subject, r.line)];
      if (std::find(labels.begin(), labels.end(), r.object) == labels.end())
        labels.push_back(r.object);
    } else if (r.predicate == "TYPE_OF") {
      std::size_t e = entity_at(r.subject, r.line);
      std::size_t t = type_at(r.object, r.line);
      g.instance_of_[e].push_back(static_cast<int>(t));
    } else if (r.predicate == "SUBCLASS_OF") {
      std::size_t a = type_at(r.subject, r.line);
      std::size_t b = type_at(r.object, r.line);
      if (a == b) throw ParseError(source, r.line, "subclass self-loop on " + r.subject);
      edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    } else {
      throw ParseError(source, r.line, "unknown record kind: " + r.predicate);
    }
  }

  for (std::size_t e = 0; e < g.instance_of_.size(); ++e) {
    auto& types = g.instance_of_[e];
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    if (types.empty())
      throw ParseError(source, entity_decl[g.entity_ids_[e]].second,
                       "entity has no type: " + g.entity_ids_[e]);
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.subclass_edges_ = std::move(edges);

  g.build_stats();
  return g;
}

void TypeGraph::build_stats() {
  entity_count_.assign(type_ids_.size(), 0);
  for (const auto& types : instance_of_)
    for (int t : types) ++entity_count_[t];

  adjacency_.assign(type_ids_.size(), {});
  for (const auto& [a, b] : subclass_edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }

  for (std::size_t e = 0; e < entity_ids_.size(); ++e) {
    for (const auto& label : labels_[e]) {
      auto& bucket = label_lookup_[normalize_label(label)];
      if (bucket.empty() || bucket.back() != static_cast<int>(e)) bucket.push_back(static_cast<int>(e));
    }
  }
}

int TypeGraph::entity_index(std::string_view id) const {
  auto it = entity_lookup_.find(std::string(id));
  return it == entity_lookup_.end() ? -1 : it->second;
}

int TypeGraph::type_index(std::string_view id) const {
  auto it = type_lookup_.find(std::string(id));
  return it == type_lookup_.end() ? -1 : it->second;
}

std::size_t TypeGraph::entity_count(std::string_view type_id) const {
  int idx = type_index(type_id);
  if (idx < 0) throw LookupError("unknown type: " + std::string(type_id));
  return entity_count_[idx];
}

std::optional<int> TypeGraph::distance(std::string_view a, std::string_view b) const {
  int ia = type_index(a);
  if (ia < 0) throw LookupError("unknown type: " + std::string(a));
  int ib = type_index(b);
  if (ib < 0) throw LookupError("unknown type: " + std::string(b));
  return distance_at(ia, ib);
}

std::optional<int> TypeGraph::distance_at(std::size_t a, std::size_t b) const {
  if (a == b) return 0;
  std::vector<int> dist(type_ids_.size(), -1);
  std::deque<std::size_t> queue;
  dist[a] = 0;
  queue.push_back(a);
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (int next : adjacency_[cur]) {
      if (dist[next] >= 0) continue;
      dist[next] = dist[cur] + 1;
      if (static_cast<std::size_t>(next) == b) return dist[next];
      queue.push_back(static_cast<std::size_t>(next));
    }
  }
  return std::nullopt;
}

std::vector<std::string> TypeGraph::types_of(std::string_view entity_id) const {
  int idx = entity_index(entity_id);
  if (idx < 0) throw LookupError("unknown entity: " + std::string(entity_id));
  std::vector<std::string> out;
  out.reserve(instance_of_[idx].size());
  for (int t : instance_of_[idx]) out.push_back(type_ids_[t]);
  return out;
}

const std::vector<int>* TypeGraph::label_candidates(const std::string& normalized) const {
  auto it = label_lookup_.find(normalized);
  return it == label_lookup_.end() ? nullptr : &it->second;
}

void TypeGraph::serialize(std::ostream& out) const {
  out << "# type system, " << entity_ids_.size() << " entities, " << type_ids_.size()
      << " types\n";
  for (const auto& t : type_ids_) out << t << "\tTYPE\t-\n";
  for (std::size_t e = 0; e < entity_ids_.size(); ++e)
    out << entity_ids_[e] << "\tENTITY\t" << labels_[e][0] << '\n';
  for (std::size_t e = 0; e < entity_ids_.size(); ++e)
    for (std::size_t j = 1; j < labels_[e].size(); ++j)
      out << entity_ids_[e] << "\tLABEL\t" << labels_[e][j] << '\n';
  for (std::size_t e = 0; e < entity_ids_.size(); ++e)
    for (int t : instance_of_[e]) out << entity_ids_[e] << "\tTYPE_OF\t" << type_ids_[t] << '\n';
  for (const auto& [a, b] : subclass_edges_)
    out << type_ids_[a] << "\tSUBCLASS_OF\t" << type_ids_[b] << '\n';
}

bool operator==(const TypeGraph& a, const TypeGraph& b) {
  return a.entity_ids_ == b.entity_ids_ && a.type_ids_ == b.type_ids_ && a.labels_ == b.labels_ &&
         a.instance_of_ == b.instance_of_ && a.subclass_edges_ == b.subclass_edges_;
}

}  // namespace kgtype
