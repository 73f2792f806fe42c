#include "condreal/serialize.hpp"

#include "condreal/errors.hpp"
#include "condreal/translations.hpp"

namespace condreal {

namespace {

SExpr with_source(SExpr form, const std::optional<Provenance>& prov) {
  if (prov) {
    form.items.push_back(SExpr::sym(":source"));
    form.items.push_back(
        SExpr::list({SExpr::sym(prov->direction), parse_sexpr(prov->source_text)}));
  }
  return form;
}

std::optional<Provenance> read_source(const SExpr& form) {
  const SExpr* slot = find_slot(form, ":source");
  if (!slot) return std::nullopt;
  if (!slot->is_list() || slot->items.size() != 2 || slot->items[0].kind != SExpr::Kind::Symbol)
    throw ParseError("malformed :source slot", slot->position);
  return Provenance{slot->items[0].symbol, write_sexpr(slot->items[1])};
}

// Loads the source object; for the directions that emit fresh natives the
// construction is re-run, which registers them under their stable names.
void materialize_source(const Provenance& prov) {
  LoadedObject src = load_object_text(prov.source_text);
  if (prov.direction == "cond-to-tz") {
    operators_to_tz_conditional(std::get<ConditionalSystem>(src));
  } else if (prov.direction == "unif-to-tz") {
    operators_to_tz_uniform(std::get<UniformSystem>(src));
  } else if (prov.direction != "tz-to-cond" && prov.direction != "tz-to-unif") {
    throw ParseError("unknown :source direction '" + prov.direction + "'", 0);
  }
}

}  // namespace

std::string write_object_text(const UniformSystem& sys) {
  return write_sexpr(with_source(uniform_system_to_sexpr(sys), sys.provenance));
}
std::string write_object_text(const ConditionalSystem& sys) {
  return write_sexpr(with_source(conditional_system_to_sexpr(sys), sys.provenance));
}
std::string write_object_text(const TZUniformWitness& w) {
  return write_sexpr(with_source(tz_uniform_to_sexpr(w), w.provenance));
}
std::string write_object_text(const TZConditionalWitness& w) {
  return write_sexpr(with_source(tz_conditional_to_sexpr(w), w.provenance));
}

LoadedObject load_object_text(const std::string& text) {
  SExpr e = parse_sexpr(text);
  if (!e.is_list() || e.items.empty() || e.items[0].kind != SExpr::Kind::Symbol)
    throw ParseError("expected a system or witness form", e.position);
  std::optional<Provenance> prov = read_source(e);
  if (prov) materialize_source(*prov);
  const std::string& head = e.items[0].symbol;
  if (head == "uniform-system") {
    UniformSystem sys = uniform_system_from_sexpr(e);
    sys.provenance = prov;
    return sys;
  }
  if (head == "conditional-system") {
    ConditionalSystem sys = conditional_system_from_sexpr(e);
    sys.provenance = prov;
    return sys;
  }
  if (head == "tz-uniform") {
    TZUniformWitness w = tz_uniform_from_sexpr(e);
    w.provenance = prov;
    return w;
  }
  if (head == "tz-conditional") {
    TZConditionalWitness w = tz_conditional_from_sexpr(e);
    w.provenance = prov;
    return w;
  }
  throw ParseError("unknown object form '" + head + "'", e.position);
}

namespace {

template <typename T>
T load_as(const std::string& text, const char* what) {
  LoadedObject obj = load_object_text(text);
  if (auto* v = std::get_if<T>(&obj)) return std::move(*v);
  throw ParseError(std::string("expected a ") + what, 0);
}

}  // namespace

UniformSystem load_uniform_system(const std::string& text) {
  return load_as<UniformSystem>(text, "uniform system");
}
ConditionalSystem load_conditional_system(const std::string& text) {
  return load_as<ConditionalSystem>(text, "conditional system");
}
TZUniformWitness load_tz_uniform(const std::string& text) {
  return load_as<TZUniformWitness>(text, "TZ uniform witness");
}
TZConditionalWitness load_tz_conditional(const std::string& text) {
  return load_as<TZConditionalWitness>(text, "TZ conditional witness");
}

}  // namespace condreal
