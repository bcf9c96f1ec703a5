#include "xoslab/protocol.hpp"

#include <bit>
#include <stdexcept>

#include "xoslab/partition.hpp"

namespace xoslab {

BitMessage BitMessage::of_set(const ItemSet& s) {
  BitMessage out;
  out.append_set(s);
  return out;
}

BitMessage BitMessage::of_uint(std::uint64_t value, std::size_t width) {
  BitMessage out;
  out.append_uint(value, width);
  return out;
}

bool BitMessage::bit(std::size_t i) const {
  if (i >= length_) throw std::out_of_range("bit index past end of message");
  return (words_[i / 64] >> (i % 64)) & 1u;
}

void BitMessage::push_back(bool b) {
  if (length_ % 64 == 0) words_.push_back(0);
  if (b) words_[length_ / 64] |= std::uint64_t{1} << (length_ % 64);
  ++length_;
}

void BitMessage::append(const BitMessage& other) {
  for (std::size_t i = 0; i < other.length_; ++i) push_back(other.bit(i));
}

void BitMessage::append_set(const ItemSet& s) {
  if (length_ % 64 == 0) {
    // Word-aligned: ItemSet keeps bits past the universe zero, so copy whole words.
    const auto w = s.words();
    words_.insert(words_.end(), w.begin(), w.end());
    length_ += s.universe();
    words_.resize((length_ + 63) / 64);
    return;
  }
  for (std::size_t i = 0; i < s.universe(); ++i) push_back(s.test(i));
}

void BitMessage::append_uint(std::uint64_t value, std::size_t width) {
  if (width > 64) throw std::invalid_argument("append_uint: width exceeds 64");
  if (width < 64 && (value >> width) != 0) throw std::invalid_argument("append_uint: value does not fit width");
  for (std::size_t i = 0; i < width; ++i) push_back((value >> i) & 1u);
}

ItemSet BitMessage::read_set(std::size_t offset, std::size_t universe) const {
  if (offset + universe > length_) throw std::out_of_range("read_set past end of message");
  ItemSet out(universe);
  if (offset % 64 == 0) {
    auto w = out.mutable_words();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = words_[offset / 64 + k];
    out.trim();
    return out;
  }
  for (std::size_t i = 0; i < universe; ++i) {
    if (bit(offset + i)) out.set(i);
  }
  return out;
}

std::uint64_t BitMessage::read_uint(std::size_t offset, std::size_t width) const {
  if (width > 64) throw std::invalid_argument("read_uint: width exceeds 64");
  if (offset + width > length_) throw std::out_of_range("read_uint past end of message");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bit(offset + i)) << i;
  return v;
}

ProtocolOutcome execute(const Protocol& p, const BidderInput& alice, const BidderInput& bob,
                        std::size_t max_rounds) {
  if (max_rounds == 0) throw std::invalid_argument("execute: max_rounds must be at least 1");
  ProtocolOutcome out;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    out.alice_to_seller.push_back(p.alice(alice, out.seller_to_alice));
    out.bob_to_seller.push_back(p.bob(bob, out.seller_to_bob));
    auto reply = p.seller(out.alice_to_seller, out.bob_to_seller);
    if (!reply) {
      out.rounds = round;
      out.allocation = p.alloc(out.alice_to_seller, out.bob_to_seller);
      if (out.allocation.to_alice.universe() != p.m) {
        throw std::logic_error("protocol '" + p.name + "' allocated over the wrong universe");
      }
      require_disjoint(out.allocation);
      out.prices = p.price(out.alice_to_seller, out.bob_to_seller);
      out.cc_bits = communication_cost(out);
      return out;
    }
    if (p.simultaneous) {
      throw std::logic_error("simultaneous protocol '" + p.name + "' sent a seller message");
    }
    out.seller_to_alice.push_back(std::move(reply->to_alice));
    out.seller_to_bob.push_back(std::move(reply->to_bob));
  }
  throw std::runtime_error("protocol '" + p.name + "' did not terminate within " +
                           std::to_string(max_rounds) + " rounds");
}

ProtocolOutcome execute(const Protocol& p, const BXOSValuation& vA, const BXOSValuation& vB,
                        std::size_t max_rounds) {
  return execute(p, BidderInput{vA, {}}, BidderInput{vB, {}}, max_rounds);
}

std::size_t communication_cost(const ProtocolOutcome& o) {
  std::size_t total = 0;
  for (const auto* t : {&o.alice_to_seller, &o.bob_to_seller, &o.seller_to_alice, &o.seller_to_bob}) {
    for (const auto& msg : *t) total += msg.size();
  }
  return total;
}

Rational approx_ratio(const ProtocolOutcome& o, const BXOSValuation& vA, const BXOSValuation& vB) {
  const std::size_t opt = opt_clause_pair(vA, vB).value;
  if (opt == 0) return Rational(1);
  return make_rational(static_cast<std::int64_t>(welfare(vA, vB, o.allocation)), static_cast<std::int64_t>(opt));
}

std::vector<TruthViolation> check_truthful(const Protocol& p, const std::vector<BXOSValuation>& V) {
  const std::size_t k = V.size();
  // Outcomes of every reported pair; utilities are read off this table.
  std::vector<ProtocolOutcome> table;
  table.reserve(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) table.push_back(execute(p, V[a], V[b]));
  }
  const auto at = [&](std::size_t a, std::size_t b) -> const ProtocolOutcome& { return table[a * k + b]; };
  const auto utility_a = [&](std::size_t truth, std::size_t rep_a, std::size_t rep_b) -> Rational {
    const auto& o = at(rep_a, rep_b);
    return Rational(static_cast<std::int64_t>(V[truth].eval(o.allocation.to_alice))) - o.prices.first;
  };
  const auto utility_b = [&](std::size_t truth, std::size_t rep_a, std::size_t rep_b) -> Rational {
    const auto& o = at(rep_a, rep_b);
    return Rational(static_cast<std::int64_t>(V[truth].eval(o.allocation.to_bob))) - o.prices.second;
  };
  std::vector<TruthViolation> out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t d = 0; d < k; ++d) {
        const Rational ga = utility_a(a, d, b) - utility_a(a, a, b);
        if (ga > 0) out.push_back({'A', a, b, d, ga});
        const Rational gb = utility_b(b, a, d) - utility_b(b, a, b);
        if (gb > 0) out.push_back({'B', a, b, d, gb});
      }
    }
  }
  return out;
}

namespace {

std::size_t value_width(std::size_t m) { return static_cast<std::size_t>(std::bit_width(m)); }

BitMessage silent(const BidderInput&, const Transcript&) { return {}; }

std::optional<SellerReply> terminate(const Transcript&, const Transcript&) { return std::nullopt; }

std::pair<Rational, Rational> free_of_charge(const Transcript&, const Transcript&) { return {Rational(0), Rational(0)}; }

Allocation everything_to(bool alice, std::size_t m) {
  Allocation a{ItemSet(m), ItemSet(m)};
  (alice ? a.to_alice : a.to_bob) = ItemSet::full(m);
  return a;
}

/// Both bidders send v(M); the grand bundle goes to the higher report with
/// ties to Alice. Shared by the trivial, Vickrey and zero-price protocols.
Protocol grand_bundle(std::string name, std::size_t m) {
  Protocol p;
  p.name = std::move(name);
  p.m = m;
  p.simultaneous = true;
  const std::size_t w = value_width(m);
  const auto report = [m, w](const BidderInput& in, const Transcript&) {
    return BitMessage::of_uint(in.valuation.eval(ItemSet::full(m)), w);
  };
  p.alice = report;
  p.bob = report;
  p.seller = terminate;
  p.alloc = [m, w](const Transcript& a, const Transcript& b) {
    return everything_to(a.at(0).read_uint(0, w) >= b.at(0).read_uint(0, w), m);
  };
  p.price = free_of_charge;
  return p;
}

bool is_special_for(const ItemSet& c, const std::vector<ItemSet>& st, const ConstantVectors& cv) {
  const Profile prof = part_profile(st, c);
  return prof == cv.spec1 || prof == cv.spec2;
}

}  // namespace

Protocol trivial_protocol(std::size_t m) { return grand_bundle("trivial", m); }

Protocol vickrey_protocol(std::size_t m) {
  Protocol p = grand_bundle("vickrey", m);
  const std::size_t w = value_width(m);
  p.price = [w](const Transcript& a, const Transcript& b) {
    const auto ra = static_cast<std::int64_t>(a.at(0).read_uint(0, w));
    const auto rb = static_cast<std::int64_t>(b.at(0).read_uint(0, w));
    return ra >= rb ? std::pair{Rational(rb), Rational(0)} : std::pair{Rational(0), Rational(ra)};
  };
  return p;
}

Protocol zero_price_protocol(std::size_t m) { return grand_bundle("zero-price", m); }

Protocol basis_exchange_protocol(std::size_t m) {
  const ConstantVectors cv = constant_vectors(m);
  Protocol p;
  p.name = "basis-exchange";
  p.m = m;
  p.alice = [m, cv](const BidderInput& in, const Transcript& received) {
    if (received.empty()) return BitMessage{};
    if (in.private_sets.size() != 2) throw std::invalid_argument("basis-exchange: Alice needs S as private sets");
    const std::vector<ItemSet> st{in.private_sets[0], in.private_sets[1], received[0].read_set(0, m),
                                  received[0].read_set(m, m)};
    for (const auto& c : in.valuation.clauses()) {
      if (is_special_for(c, st, cv)) return BitMessage::of_set(c);
    }
    // Not a ν instance; fall back to the first clause so the run still ends.
    return BitMessage::of_set(in.valuation.clause(0));
  };
  p.bob = [](const BidderInput& in, const Transcript& received) {
    if (!received.empty()) return BitMessage{};
    if (in.private_sets.size() != 2) throw std::invalid_argument("basis-exchange: Bob needs T as private sets");
    BitMessage msg = BitMessage::of_set(in.private_sets[0]);
    msg.append_set(in.private_sets[1]);
    return msg;
  };
  p.seller = [](const Transcript& a, const Transcript& b) -> std::optional<SellerReply> {
    if (a.size() == 1) return SellerReply{b[0], BitMessage{}};
    return std::nullopt;
  };
  p.alloc = [m](const Transcript& a, const Transcript&) {
    Allocation out{a.at(1).read_set(0, m), ItemSet(m)};
    out.to_bob = out.to_alice.complement();
    return out;
  };
  p.price = free_of_charge;
  return p;
}

Protocol random_clause_protocol(std::size_t m, std::uint64_t seed) {
  Protocol p;
  p.name = "random-clause";
  p.m = m;
  p.simultaneous = true;
  p.alice = [seed](const BidderInput& in, const Transcript&) {
    RngStream rng(seed, 0);
    return BitMessage::of_set(in.valuation.clause(rng.uniform_below(in.valuation.size())));
  };
  p.bob = silent;
  p.seller = terminate;
  p.alloc = [m](const Transcript& a, const Transcript&) {
    Allocation out{a.at(0).read_set(0, m), ItemSet(m)};
    out.to_bob = out.to_alice.complement();
    return out;
  };
  p.price = free_of_charge;
  return p;
}

std::vector<std::string> protocol_names() {
  return {"trivial", "basis-exchange", "random-clause", "vickrey", "zero-price"};
}

Protocol make_protocol(const std::string& name, std::size_t m, std::uint64_t seed) {
  if (name == "trivial") return trivial_protocol(m);
  if (name == "basis-exchange") return basis_exchange_protocol(m);
  if (name == "random-clause") return random_clause_protocol(m, seed);
  if (name == "vickrey") return vickrey_protocol(m);
  if (name == "zero-price") return zero_price_protocol(m);
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

std::size_t special_candidates(const Instance& inst, const InstanceValuations& vals) {
  const auto cv = constant_vectors(inst.m);
  const std::vector<ItemSet> st{inst.S.s1, inst.S.s2, inst.T.s1, inst.T.s2};
  std::size_t k = 0;
  for (const auto& c : vals.vA.clauses()) k += is_special_for(c, st, cv) ? 1 : 0;
  return k;
}

std::pair<BidderInput, BidderInput> bidder_inputs(const Instance& inst, const InstanceValuations& vals) {
  return {BidderInput{vals.vA, inst.S.sets()}, BidderInput{vals.vB, inst.T.sets()}};
}

}  // namespace xoslab
