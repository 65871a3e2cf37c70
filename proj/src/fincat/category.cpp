#include "fintopos/fincat/category.hpp"

#include <map>
#include <sstream>

namespace fintopos {

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].kind << ": " << violations[i].message;
  }
  return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error("validation failed: " + report.summary()), report_(std::move(report)) {}

ValidationReport validate_category(const CategoryData& data) {
  ValidationReport report;
  const int n = static_cast<int>(data.objects.size());
  const int m = static_cast<int>(data.morphisms.size());
  auto valid_obj = [&](ObjId x) { return x >= 0 && x < n; };
  auto valid_mor = [&](MorId f) { return f >= 0 && f < m; };

  for (MorId f = 0; f < m; ++f) {
    const auto& mor = data.morphisms[f];
    if (!valid_obj(mor.src) || !valid_obj(mor.tgt))
      report.add("dangling", "morphism '" + mor.name + "' has an unknown source or target", {f});
  }
  if (static_cast<int>(data.identity.size()) != n) {
    report.add("structure", "identity table does not cover every object");
  }
  if (data.compose.size() != static_cast<std::size_t>(m) * m) {
    report.add("structure", "composition table has the wrong size");
  }
  {
    std::map<std::string, int> seen;
    for (ObjId x = 0; x < n; ++x)
      if (!seen.emplace(data.objects[x], x).second)
        report.add("duplicate", "object name '" + data.objects[x] + "' repeated", {x});
    std::map<std::string, int> seen_mor;
    for (MorId f = 0; f < m; ++f)
      if (!seen_mor.emplace(data.morphisms[f].name, f).second)
        report.add("duplicate", "morphism name '" + data.morphisms[f].name + "' repeated", {f});
  }
  if (!report.ok()) return report;

  for (ObjId x = 0; x < n; ++x) {
    MorId id = data.identity[x];
    if (!valid_mor(id) || data.morphisms[id].src != x || data.morphisms[id].tgt != x)
      report.add("identity", "identity of '" + data.objects[x] + "' is not an endomorphism of it", {x});
  }
  if (!report.ok()) return report;

  auto comp = [&](MorId g, MorId f) { return data.compose[static_cast<std::size_t>(g) * m + f]; };
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      const bool composable = data.morphisms[f].tgt == data.morphisms[g].src;
      MorId h = comp(g, f);
      if (!composable) {
        if (h != kNone)
          report.add("compose", "entry defined for non-composable pair", {g, f});
        continue;
      }
      if (!valid_mor(h)) {
        report.add("compose", "missing composite " + data.morphisms[g].name + "∘" +
                                  data.morphisms[f].name, {g, f});
        continue;
      }
      if (data.morphisms[h].src != data.morphisms[f].src ||
          data.morphisms[h].tgt != data.morphisms[g].tgt)
        report.add("compose", "composite has wrong source or target", {g, f});
    }
  }
  if (!report.ok()) return report;

  for (MorId f = 0; f < m; ++f) {
    const auto& mor = data.morphisms[f];
    MorId left = comp(data.identity[mor.tgt], f);
    MorId right = comp(f, data.identity[mor.src]);
    if (left != f) report.add("unit", "id∘f != f", {f, data.identity[mor.tgt]});
    if (right != f) report.add("unit", "f∘id != f", {f, data.identity[mor.src]});
  }
  for (MorId h = 0; h < m; ++h)
    for (MorId g = 0; g < m; ++g) {
      if (data.morphisms[g].tgt != data.morphisms[h].src) continue;
      MorId hg = comp(h, g);
      for (MorId f = 0; f < m; ++f) {
        if (data.morphisms[f].tgt != data.morphisms[g].src) continue;
        if (comp(h, comp(g, f)) != comp(hg, f))
          report.add("associativity", "h∘(g∘f) != (h∘g)∘f", {h, g, f});
      }
    }
  return report;
}

void check_bounds(const CategoryData& data, const CategoryBounds& bounds, ValidationReport& report) {
  const int n = static_cast<int>(data.objects.size());
  const int non_id = static_cast<int>(data.morphisms.size()) - n;
  if (n > bounds.max_objects)
    report.add("bound", "category '" + data.name + "' has " + std::to_string(n) +
                            " objects (limit " + std::to_string(bounds.max_objects) + ")");
  if (non_id > bounds.max_non_identity_morphisms)
    report.add("bound", "category '" + data.name + "' has " + std::to_string(non_id) +
                            " non-identity morphisms (limit " +
                            std::to_string(bounds.max_non_identity_morphisms) + ")");
}

FinCategory::FinCategory(CategoryData data) : data_(std::move(data)) {
  auto report = validate_category(data_);
  if (!report.ok()) throw ValidationError(std::move(report));
  index();
}

FinCategory::FinCategory(CategoryData data, Trusted) : data_(std::move(data)) { index(); }

void FinCategory::index() {
  const int n = num_objects();
  homs_.assign(static_cast<std::size_t>(n) * n, {});
  into_.assign(n, {});
  out_of_.assign(n, {});
  for (MorId f = 0; f < num_morphisms(); ++f) {
    homs_[static_cast<std::size_t>(src(f)) * n + tgt(f)].push_back(f);
    into_[tgt(f)].push_back(f);
    out_of_[src(f)].push_back(f);
  }
}

MorId FinCategory::compose(MorId g, MorId f) const {
  MorId h = try_compose(g, f);
  if (h == kNone)
    throw ContractError("cannot compose " + morphism_name(g) + " after " + morphism_name(f));
  return h;
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const {
  for (ObjId x = 0; x < num_objects(); ++x)
    if (data_.objects[x] == name) return x;
  return std::nullopt;
}

std::optional<MorId> FinCategory::find_morphism(std::string_view name) const {
  for (MorId f = 0; f < num_morphisms(); ++f)
    if (data_.morphisms[f].name == name) return f;
  return std::nullopt;
}

ObjId FinCategory::object(std::string_view name) const {
  if (auto x = find_object(name)) return *x;
  throw ContractError("unknown object '" + std::string(name) + "' in " + data_.name);
}

MorId FinCategory::morphism(std::string_view name) const {
  if (auto f = find_morphism(name)) return *f;
  throw ContractError("unknown morphism '" + std::string(name) + "' in " + data_.name);
}

bool same_category(const FinCategory& a, const FinCategory& b) {
  return &a == &b || a.data() == b.data();
}

CatPtr make_category(CategoryData data) {
  return std::make_shared<const FinCategory>(std::move(data));
}

CatPtr make_trusted_category(CategoryData data) {
  return std::make_shared<const FinCategory>(std::move(data), FinCategory::Trusted{});
}

CatPtr make_bounded_category(CategoryData data, const CategoryBounds& bounds) {
  ValidationReport report = validate_category(data);
  check_bounds(data, bounds, report);
  if (!report.ok()) throw ValidationError(std::move(report));
  return make_category(std::move(data));
}

CategoryData opposite(const CategoryData& data) {
  CategoryData op = data;
  op.name = data.name + "^op";
  if (data.name.size() > 3 && data.name.ends_with("^op")) op.name = data.name.substr(0, data.name.size() - 3);
  const std::size_t m = data.morphisms.size();
  for (auto& mor : op.morphisms) std::swap(mor.src, mor.tgt);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) op.compose[g * m + f] = data.compose[f * m + g];
  return op;
}

CatPtr opposite(const FinCategory& c) { return make_category(opposite(c.data())); }

ObjId CategoryBuilder::add_object(std::string name, std::string identity_name) {
  ObjId x = static_cast<ObjId>(data_.objects.size());
  if (identity_name.empty()) identity_name = "id_" + name;
  data_.objects.push_back(std::move(name));
  data_.identity.push_back(static_cast<MorId>(data_.morphisms.size()));
  data_.morphisms.push_back({std::move(identity_name), x, x});
  return x;
}

MorId CategoryBuilder::add_morphism(std::string name, std::string_view src, std::string_view tgt) {
  MorId f = static_cast<MorId>(data_.morphisms.size());
  data_.morphisms.push_back({std::move(name), obj(src), obj(tgt)});
  return f;
}

CategoryBuilder& CategoryBuilder::set_compose(std::string_view g, std::string_view f,
                                              std::string_view result) {
  entries_.emplace_back(mor(g), mor(f), mor(result));
  return *this;
}

ObjId CategoryBuilder::obj(std::string_view name) const {
  for (ObjId x = 0; x < static_cast<ObjId>(data_.objects.size()); ++x)
    if (data_.objects[x] == name) return x;
  throw ContractError("builder: unknown object '" + std::string(name) + "'");
}

MorId CategoryBuilder::mor(std::string_view name) const {
  for (MorId f = 0; f < static_cast<MorId>(data_.morphisms.size()); ++f)
    if (data_.morphisms[f].name == name) return f;
  throw ContractError("builder: unknown morphism '" + std::string(name) + "'");
}

CategoryData CategoryBuilder::data() const {
  CategoryData out = data_;
  const std::size_t m = out.morphisms.size();
  out.compose.assign(m * m, kNone);
  for (std::size_t f = 0; f < m; ++f) {
    const auto& mor = out.morphisms[f];
    out.compose[static_cast<std::size_t>(out.identity[mor.tgt]) * m + f] = static_cast<MorId>(f);
    out.compose[f * m + static_cast<std::size_t>(out.identity[mor.src])] = static_cast<MorId>(f);
  }
  for (auto [g, f, h] : entries_) out.compose[static_cast<std::size_t>(g) * m + f] = h;
  return out;
}

CatPtr make_poset(std::string name, const std::vector<std::string>& names,
                  const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(names.size());
  CategoryData data;
  data.name = std::move(name);
  data.objects = names;
  std::vector<std::vector<MorId>> arrow(n, std::vector<MorId>(n, kNone));
  for (int i = 0; i < n; ++i) {
    arrow[i][i] = static_cast<MorId>(data.morphisms.size());
    data.identity.push_back(arrow[i][i]);
    data.morphisms.push_back({"id_" + names[i], i, i});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && leq[i][j]) {
        if (leq[j][i]) throw ContractError("make_poset: order is not antisymmetric");
        arrow[i][j] = static_cast<MorId>(data.morphisms.size());
        data.morphisms.push_back({names[i] + "<" + names[j], i, j});
      }
  const std::size_t m = data.morphisms.size();
  data.compose.assign(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) {
      if (data.morphisms[f].tgt != data.morphisms[g].src) continue;
      int a = data.morphisms[f].src, c = data.morphisms[g].tgt;
      if (arrow[a][c] == kNone) throw ContractError("make_poset: order is not transitive");
      data.compose[g * m + f] = arrow[a][c];
    }
  return make_category(std::move(data));
}

CatPtr make_chain(std::string name, int n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = i; j < n; ++j) leq[i][j] = true;
  }
  return make_poset(std::move(name), names, leq);
}

CatPtr make_discrete(std::string name, int n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::string(1, static_cast<char>('a' + i)));
    leq[i][i] = true;
  }
  return make_poset(std::move(name), names, leq);
}

CatPtr make_monoid(std::string name, const std::vector<std::string>& elements,
                   const std::vector<std::vector<int>>& table) {
  CategoryData data;
  data.name = std::move(name);
  data.objects = {"*"};
  data.identity = {0};
  for (const auto& e : elements) data.morphisms.push_back({e, 0, 0});
  const std::size_t m = elements.size();
  data.compose.assign(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f) data.compose[g * m + f] = table[g][f];
  return make_category(std::move(data));
}

const CatPtr& terminal_category() {
  static const CatPtr one = [] {
    CategoryBuilder b("1");
    b.add_object("*", "id");
    return b.build();
  }();
  return one;
}

}  // namespace fintopos
