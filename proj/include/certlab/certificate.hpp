#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certlab/graph.hpp"

namespace certlab {

enum class FieldKind { Int, IdList, BitVec, Bytes, SubCerts };

// Ordered list of named typed fields with explicit bit widths. Bit
// accounting is serialization-exact: serialize_bits() emits exactly
// size_bits() bits.
class Certificate {
 public:
  struct Field;

  Certificate() = default;

  // Builders validate that values fit their declared widths.
  Certificate& add_int(std::string name, std::uint64_t value, int bits);
  Certificate& add_ids(std::string name, std::vector<NodeId> ids, int bits_per_id);
  Certificate& add_bits(std::string name, std::vector<bool> bits);
  Certificate& add_bytes(std::string name, std::string bytes);
  Certificate& add_subs(std::string name, std::vector<Certificate> subs);

  const Field* find(std::string_view name) const;  // nullptr when absent
  // Checked getters: nullopt/nullptr on a missing field or kind mismatch.
  std::optional<std::uint64_t> get_int(std::string_view name) const;
  const std::vector<NodeId>* get_ids(std::string_view name) const;
  const std::vector<bool>* get_bits(std::string_view name) const;
  const std::string* get_bytes(std::string_view name) const;
  const std::vector<Certificate>* get_subs(std::string_view name) const;

  std::vector<Field>& fields() { return fields_; }
  const std::vector<Field>& fields() const { return fields_; }
  bool empty() const { return fields_.empty(); }

  long long size_bits() const;
  std::string serialize_bits() const;  // '0'/'1' characters
  std::string dump_inline() const;     // "<field>=<value>(<bits>b), ..."
  bool operator==(const Certificate& other) const;
  bool operator!=(const Certificate& other) const { return !(*this == other); }

 private:
  std::vector<Field> fields_;
};

struct Certificate::Field {
  std::string name;
  FieldKind kind = FieldKind::Int;
  std::uint64_t int_value = 0;
  std::vector<NodeId> ids;
  std::vector<bool> bit_vec;
  std::string bytes;
  std::vector<Certificate> subs;
  // Int: field width. IdList: width per element. Other kinds derive
  // their width from the payload.
  int declared_bits = 0;

  long long width_bits() const;
  bool operator==(const Field& other) const;
};

using CertMap = std::map<NodeId, Certificate>;

struct SizeStats {
  long long max_bits = 0;
  long long total_bits = 0;
  std::map<NodeId, long long> per_node;
};
SizeStats cert_size_bits(const CertMap& c);

// Sum of widths of the top-level fields with the given names.
long long cert_component_bits(const Certificate& c, const std::vector<std::string>& names);

// ceil(log2(max_value + 1)): bits needed to store values 0..max_value.
int bit_width_for(std::uint64_t max_value);

// Machine-readable sidecar format (JSON).
std::string save_cert_map(const CertMap& c, const std::string& scheme);
struct LoadedCerts {
  std::string scheme;
  CertMap certs;
};
LoadedCerts load_cert_map(const std::string& text);

// Human-readable dump: one line per node.
std::string dump_cert_map(const CertMap& c);

}  // namespace certlab
