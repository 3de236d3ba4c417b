#include "certlab/fuzzer.hpp"

#include <string>
#include <utility>
#include <vector>

namespace certlab {
namespace {

void mutate_value(Certificate::Field& f, Rng& rng) {
  switch (f.kind) {
    case FieldKind::Int: {
      int bits = f.declared_bits > 0 ? f.declared_bits : 4;
      f.int_value ^= 1ULL << rng.below(static_cast<std::uint64_t>(bits));
      break;
    }
    case FieldKind::IdList: {
      if (f.ids.empty()) {
        f.ids.push_back(static_cast<NodeId>(rng.below(1 << 10)));
      } else {
        std::size_t i = rng.below(f.ids.size());
        int bits = f.declared_bits > 0 && f.declared_bits < 20 ? f.declared_bits : 10;
        f.ids[i] = static_cast<NodeId>(rng.below(1ULL << bits));
      }
      break;
    }
    case FieldKind::BitVec: {
      if (f.bit_vec.empty())
        f.bit_vec.push_back(true);
      else {
        std::size_t i = rng.below(f.bit_vec.size());
        f.bit_vec[i] = !f.bit_vec[i];
      }
      break;
    }
    case FieldKind::Bytes: {
      if (f.bytes.empty())
        f.bytes.push_back('x');
      else {
        std::size_t i = rng.below(f.bytes.size());
        f.bytes[i] = static_cast<char>(f.bytes[i] ^ (1 << rng.below(7)));
      }
      break;
    }
    case FieldKind::SubCerts: {
      if (f.subs.empty()) break;
      Certificate& sub = f.subs[rng.below(f.subs.size())];
      if (sub.fields().empty()) break;
      mutate_value(sub.fields()[rng.below(sub.fields().size())], rng);
      break;
    }
  }
}

void truncate_value(Certificate::Field& f) {
  switch (f.kind) {
    case FieldKind::IdList:
      if (!f.ids.empty()) f.ids.pop_back();
      break;
    case FieldKind::BitVec:
      if (!f.bit_vec.empty()) f.bit_vec.pop_back();
      break;
    case FieldKind::Bytes:
      if (!f.bytes.empty()) f.bytes.pop_back();
      break;
    case FieldKind::SubCerts:
      if (!f.subs.empty()) f.subs.pop_back();
      break;
    case FieldKind::Int:
      f.int_value >>= 1;
      break;
  }
}

}  // namespace

CertMutator::CertMutator(CertMap base, std::uint64_t seed)
    : base_(std::move(base)), rng_(seed) {
  for (const auto& [v, c] : base_) nodes_.push_back(v);
}

CertMap CertMutator::next(int ops) {
  CertMap certs = base_;
  for (int i = 0; i < ops; ++i) apply_one(certs);
  return certs;
}

void CertMutator::apply_one(CertMap& certs) {
  if (nodes_.empty()) return;
  NodeId v = nodes_[rng_.below(nodes_.size())];
  Certificate& c = certs[v];
  std::uint64_t action = rng_.below(100);
  if (action < 55) {
    if (!c.fields().empty()) mutate_value(c.fields()[rng_.below(c.fields().size())], rng_);
  } else if (action < 70) {
    if (!c.fields().empty()) truncate_value(c.fields()[rng_.below(c.fields().size())]);
  } else if (action < 80) {
    if (!c.fields().empty())
      c.fields().erase(c.fields().begin() + static_cast<long>(rng_.below(c.fields().size())));
  } else if (action < 90) {
    NodeId w = nodes_[rng_.below(nodes_.size())];
    std::swap(certs[v], certs[w]);
  } else {
    NodeId w = nodes_[rng_.below(nodes_.size())];
    certs[v] = certs[w];
  }
}

std::vector<AttackBase> adversarial_bases(const Graph& g, const Scheme& s) {
  std::vector<AttackBase> bases;
  for (const std::string& strategy : s.attack_strategies()) {
    std::vector<CertMap> maps = s.attack(g, strategy);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      AttackBase base;
      base.label = strategy + (maps.size() > 1 ? "#" + std::to_string(i) : "");
      base.certs = std::move(maps[i]);
      bases.push_back(std::move(base));
    }
  }
  return bases;
}

FuzzReport fuzz_soundness(const Graph& g, const Scheme& s, long long budget,
                          std::uint64_t seed) {
  FuzzReport report;
  std::vector<AttackBase> bases = adversarial_bases(g, s);
  AttackBase zero;
  zero.label = "zero";
  for (NodeId v : g.nodes()) zero.certs[v] = Certificate{};
  bases.push_back(std::move(zero));

  auto note = [&](const std::string& line) {
    if (report.notes.size() < 16) report.notes.push_back(line);
  };
  for (const auto& base : bases) {
    if (report.attempts >= budget) break;
    ++report.attempts;
    if (run_verification(g, base.certs, s).accepted) {
      ++report.escapes;
      note("accepted: " + base.label);
    }
  }
  std::vector<CertMutator> mutators;
  for (std::size_t i = 0; i < bases.size(); ++i)
    mutators.emplace_back(bases[i].certs, seed + i);
  long long round = 0;
  while (report.attempts < budget) {
    std::size_t b = static_cast<std::size_t>(round) % bases.size();
    CertMap certs = mutators[b].next(1 + static_cast<int>(round % 4));
    ++report.attempts;
    if (run_verification(g, certs, s).accepted) {
      ++report.escapes;
      note("accepted: mutation of " + bases[b].label + " at round " + std::to_string(round));
    }
    ++round;
  }
  return report;
}

}  // namespace certlab
