#include "certlab/certificate.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <nlohmann/json.hpp>

#include "certlab/errors.hpp"

namespace certlab {

namespace {

void check_fits(std::uint64_t value, int bits, const std::string& name) {
  if (bits < 0 || bits > 64)
    throw ValidationError("field '" + name + "': width " + std::to_string(bits) + " out of range");
  if (bits < 64 && value >= (std::uint64_t(1) << bits))
    throw ValidationError("field '" + name + "': value " + std::to_string(value) +
                          " does not fit in " + std::to_string(bits) + " bits");
}

}  // namespace

Certificate& Certificate::add_int(std::string name, std::uint64_t value, int bits) {
  check_fits(value, bits, name);
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Int;
  f.int_value = value;
  f.declared_bits = bits;
  fields_.push_back(std::move(f));
  return *this;
}

Certificate& Certificate::add_ids(std::string name, std::vector<NodeId> ids, int bits_per_id) {
  for (NodeId id : ids) check_fits(static_cast<std::uint64_t>(id), bits_per_id, name);
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::IdList;
  f.ids = std::move(ids);
  f.declared_bits = bits_per_id;
  fields_.push_back(std::move(f));
  return *this;
}

Certificate& Certificate::add_bits(std::string name, std::vector<bool> bits) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::BitVec;
  f.bit_vec = std::move(bits);
  f.declared_bits = 1;
  fields_.push_back(std::move(f));
  return *this;
}

Certificate& Certificate::add_bytes(std::string name, std::string bytes) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::Bytes;
  f.bytes = std::move(bytes);
  f.declared_bits = 8;
  fields_.push_back(std::move(f));
  return *this;
}

Certificate& Certificate::add_subs(std::string name, std::vector<Certificate> subs) {
  Field f;
  f.name = std::move(name);
  f.kind = FieldKind::SubCerts;
  f.subs = std::move(subs);
  fields_.push_back(std::move(f));
  return *this;
}

const Certificate::Field* Certificate::find(std::string_view name) const {
  for (const Field& f : fields_)
    if (f.name == name) return &f;
  return nullptr;
}

std::optional<std::uint64_t> Certificate::get_int(std::string_view name) const {
  const Field* f = find(name);
  if (!f || f->kind != FieldKind::Int) return std::nullopt;
  return f->int_value;
}

const std::vector<NodeId>* Certificate::get_ids(std::string_view name) const {
  const Field* f = find(name);
  return f && f->kind == FieldKind::IdList ? &f->ids : nullptr;
}

const std::vector<bool>* Certificate::get_bits(std::string_view name) const {
  const Field* f = find(name);
  return f && f->kind == FieldKind::BitVec ? &f->bit_vec : nullptr;
}

const std::string* Certificate::get_bytes(std::string_view name) const {
  const Field* f = find(name);
  return f && f->kind == FieldKind::Bytes ? &f->bytes : nullptr;
}

const std::vector<Certificate>* Certificate::get_subs(std::string_view name) const {
  const Field* f = find(name);
  return f && f->kind == FieldKind::SubCerts ? &f->subs : nullptr;
}

long long Certificate::Field::width_bits() const {
  switch (kind) {
    case FieldKind::Int:
      return declared_bits;
    case FieldKind::IdList:
      return static_cast<long long>(ids.size()) * declared_bits;
    case FieldKind::BitVec:
      return static_cast<long long>(bit_vec.size());
    case FieldKind::Bytes:
      return 8ll * static_cast<long long>(bytes.size());
    case FieldKind::SubCerts: {
      long long total = 0;
      for (const Certificate& s : subs) total += s.size_bits();
      return total;
    }
  }
  return 0;
}

bool Certificate::Field::operator==(const Field& other) const {
  return name == other.name && kind == other.kind && int_value == other.int_value &&
         ids == other.ids && bit_vec == other.bit_vec && bytes == other.bytes &&
         subs == other.subs && declared_bits == other.declared_bits;
}

long long Certificate::size_bits() const {
  long long total = 0;
  for (const Field& f : fields_) total += f.width_bits();
  return total;
}

namespace {

void append_uint(std::string& out, std::uint64_t value, int bits) {
  for (int i = bits - 1; i >= 0; --i) out += ((value >> i) & 1) ? '1' : '0';
}

}  // namespace

std::string Certificate::serialize_bits() const {
  std::string out;
  for (const Field& f : fields_) {
    switch (f.kind) {
      case FieldKind::Int:
        append_uint(out, f.int_value, f.declared_bits);
        break;
      case FieldKind::IdList:
        for (NodeId id : f.ids) append_uint(out, static_cast<std::uint64_t>(id), f.declared_bits);
        break;
      case FieldKind::BitVec:
        for (bool b : f.bit_vec) out += b ? '1' : '0';
        break;
      case FieldKind::Bytes:
        for (unsigned char c : f.bytes) append_uint(out, c, 8);
        break;
      case FieldKind::SubCerts:
        for (const Certificate& s : f.subs) out += s.serialize_bits();
        break;
    }
  }
  return out;
}

std::string Certificate::dump_inline() const {
  std::ostringstream out;
  bool first = true;
  for (const Field& f : fields_) {
    if (!first) out << ", ";
    first = false;
    out << f.name << "=";
    switch (f.kind) {
      case FieldKind::Int:
        out << f.int_value;
        break;
      case FieldKind::IdList: {
        out << "[";
        for (std::size_t i = 0; i < f.ids.size(); ++i) out << (i ? "," : "") << f.ids[i];
        out << "]";
        break;
      }
      case FieldKind::BitVec:
        for (bool b : f.bit_vec) out << (b ? '1' : '0');
        break;
      case FieldKind::Bytes:
        out << f.bytes;
        break;
      case FieldKind::SubCerts: {
        out << "{";
        for (std::size_t i = 0; i < f.subs.size(); ++i)
          out << (i ? "; " : "") << f.subs[i].dump_inline();
        out << "}";
        break;
      }
    }
    out << "(" << f.width_bits() << "b)";
  }
  return out.str();
}

bool Certificate::operator==(const Certificate& other) const { return fields_ == other.fields_; }

SizeStats cert_size_bits(const CertMap& c) {
  SizeStats s;
  for (const auto& [v, cert] : c) {
    long long bits = cert.size_bits();
    s.per_node[v] = bits;
    s.total_bits += bits;
    s.max_bits = std::max(s.max_bits, bits);
  }
  return s;
}

long long cert_component_bits(const Certificate& c, const std::vector<std::string>& names) {
  long long total = 0;
  for (const auto& f : c.fields())
    if (std::find(names.begin(), names.end(), f.name) != names.end()) total += f.width_bits();
  return total;
}

int bit_width_for(std::uint64_t max_value) { return std::bit_width(max_value); }

namespace {

using nlohmann::json;

json field_to_json(const Certificate::Field& f);

json cert_to_json(const Certificate& c) {
  json fields = json::array();
  for (const auto& f : c.fields()) fields.push_back(field_to_json(f));
  return json{{"fields", fields}};
}

json field_to_json(const Certificate::Field& f) {
  json j{{"name", f.name}};
  switch (f.kind) {
    case FieldKind::Int:
      j["kind"] = "int";
      j["value"] = f.int_value;
      j["bits"] = f.declared_bits;
      break;
    case FieldKind::IdList:
      j["kind"] = "ids";
      j["value"] = f.ids;
      j["bits"] = f.declared_bits;
      break;
    case FieldKind::BitVec: {
      j["kind"] = "bits";
      std::string s;
      for (bool b : f.bit_vec) s += b ? '1' : '0';
      j["value"] = s;
      break;
    }
    case FieldKind::Bytes:
      j["kind"] = "bytes";
      j["value"] = f.bytes;
      break;
    case FieldKind::SubCerts: {
      j["kind"] = "subs";
      json subs = json::array();
      for (const Certificate& s : f.subs) subs.push_back(cert_to_json(s));
      j["value"] = subs;
      break;
    }
  }
  return j;
}

Certificate cert_from_json(const json& j);

void field_from_json(const json& j, Certificate& c) {
  std::string name = j.at("name").get<std::string>();
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "int") {
    c.add_int(name, j.at("value").get<std::uint64_t>(), j.at("bits").get<int>());
  } else if (kind == "ids") {
    c.add_ids(name, j.at("value").get<std::vector<NodeId>>(), j.at("bits").get<int>());
  } else if (kind == "bits") {
    std::vector<bool> bits;
    for (char ch : j.at("value").get<std::string>()) {
      if (ch != '0' && ch != '1') throw ParseError("bit vector field '" + name + "' has non-bit");
      bits.push_back(ch == '1');
    }
    c.add_bits(name, std::move(bits));
  } else if (kind == "bytes") {
    c.add_bytes(name, j.at("value").get<std::string>());
  } else if (kind == "subs") {
    std::vector<Certificate> subs;
    for (const json& s : j.at("value")) subs.push_back(cert_from_json(s));
    c.add_subs(name, std::move(subs));
  } else {
    throw ParseError("unknown certificate field kind '" + kind + "'");
  }
}

Certificate cert_from_json(const json& j) {
  Certificate c;
  for (const json& f : j.at("fields")) field_from_json(f, c);
  return c;
}

}  // namespace

std::string save_cert_map(const CertMap& c, const std::string& scheme) {
  json certs = json::object();
  for (const auto& [v, cert] : c) certs[std::to_string(v)] = cert_to_json(cert);
  json root{{"scheme", scheme}, {"certs", certs}};
  return root.dump(1);
}

LoadedCerts load_cert_map(const std::string& text) {
  LoadedCerts out;
  try {
    json root = json::parse(text);
    out.scheme = root.at("scheme").get<std::string>();
    for (const auto& [key, val] : root.at("certs").items())
      out.certs[std::stoi(key)] = cert_from_json(val);
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate file: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("certificate file: node key is not an integer");
  }
  return out;
}

std::string dump_cert_map(const CertMap& c) {
  std::ostringstream out;
  for (const auto& [v, cert] : c) out << v << ": " << cert.dump_inline() << "\n";
  return out.str();
}

}  // namespace certlab
