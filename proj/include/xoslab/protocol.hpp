#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xoslab/construction.hpp"
#include "xoslab/item_set.hpp"
#include "xoslab/rational.hpp"
#include "xoslab/valuation.hpp"

namespace xoslab {

/// A bit string of exact length. No framing: size() is what CC counts.
class BitMessage {
 public:
  BitMessage() = default;
  static BitMessage of_set(const ItemSet& s);
  static BitMessage of_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }
  bool bit(std::size_t i) const;

  void push_back(bool b);
  void append(const BitMessage& other);
  void append_set(const ItemSet& s);
  void append_uint(std::uint64_t value, std::size_t width);

  /// Reads bits [offset, offset + universe) as a set. Throws std::out_of_range
  /// when the message is too short.
  ItemSet read_set(std::size_t offset, std::size_t universe) const;
  std::uint64_t read_uint(std::size_t offset, std::size_t width) const;

  friend bool operator==(const BitMessage&, const BitMessage&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

using Transcript = std::vector<BitMessage>;

/// What a bidder holds. The protocol functions see only their own input.
/// private_sets carries side information a protocol may use beyond the
/// valuation (the basis of an instance).
struct BidderInput {
  BXOSValuation valuation;
  std::vector<ItemSet> private_sets;
};

struct SellerReply {
  BitMessage to_alice;
  BitMessage to_bob;
};

/// Five functions describing a deterministic protocol. A bidder maps its input
/// and the seller messages received so far to its next message. The seller
/// sees both bidder transcripts and either replies or terminates (nullopt).
struct Protocol {
  using BidderFn = std::function<BitMessage(const BidderInput&, const Transcript& received)>;
  using SellerFn = std::function<std::optional<SellerReply>(const Transcript& from_a, const Transcript& from_b)>;
  using AllocFn = std::function<Allocation(const Transcript& from_a, const Transcript& from_b)>;
  using PriceFn = std::function<std::pair<Rational, Rational>(const Transcript& from_a, const Transcript& from_b)>;

  std::string name;
  std::size_t m = 0;
  /// Declared one-round: the seller must terminate in round 1.
  bool simultaneous = false;
  BidderFn alice;
  BidderFn bob;
  SellerFn seller;
  AllocFn alloc;
  PriceFn price;
};

struct ProtocolOutcome {
  Allocation allocation;
  std::pair<Rational, Rational> prices;
  std::size_t rounds = 0;
  std::size_t cc_bits = 0;
  Transcript alice_to_seller;
  Transcript bob_to_seller;
  /// Seller replies for rounds 1..R-1 (the final round ends in termination).
  Transcript seller_to_alice;
  Transcript seller_to_bob;

  friend bool operator==(const ProtocolOutcome&, const ProtocolOutcome&) = default;
};

/// Runs p to termination. Throws std::runtime_error when max_rounds pass
/// without termination and std::logic_error when the allocation overlaps,
/// has the wrong universe, or a simultaneous protocol receives a seller reply.
ProtocolOutcome execute(const Protocol& p, const BidderInput& alice, const BidderInput& bob,
                        std::size_t max_rounds = 64);
ProtocolOutcome execute(const Protocol& p, const BXOSValuation& vA, const BXOSValuation& vB,
                        std::size_t max_rounds = 64);

/// Bidder message bits over all rounds plus seller bits over all but the last.
std::size_t communication_cost(const ProtocolOutcome& o);

/// Welfare over opt, exact. Defined as 1 when opt is 0.
Rational approx_ratio(const ProtocolOutcome& o, const BXOSValuation& vA, const BXOSValuation& vB);

struct TruthViolation {
  char bidder = 'A';
  /// Indices into the valuation set: the true inputs and the misreport.
  std::size_t v_alice = 0;
  std::size_t v_bob = 0;
  std::size_t deviation = 0;
  /// Utility of deviating minus utility of truth; positive.
  Rational gap;
};

/// Enumerates every (vA, vB, v') and both bidders' deviations.
std::vector<TruthViolation> check_truthful(const Protocol& p, const std::vector<BXOSValuation>& V);

// Baseline protocols over m items.

/// Both bidders report v(M); all items go to the higher report, ties to Alice.
Protocol trivial_protocol(std::size_t m);
/// Round 1: Bob sends T, the seller forwards it to Alice. Round 2: Alice sends
/// her first clause that is 1- or 2-special with respect to (S, T); Alice gets
/// it and Bob its complement. Needs the bases as private_sets.
Protocol basis_exchange_protocol(std::size_t m);
/// Number of Alice's clauses that look special with respect to (S, T). The
/// basis-exchange protocol is optimal whenever this is 1. At small m a regular
/// clause can match the special profile by chance and Alice cannot tell them
/// apart.
std::size_t special_candidates(const Instance& inst, const InstanceValuations& vals);
/// Alice sends the clause picked by `seed`; she gets it, Bob the rest.
Protocol random_clause_protocol(std::size_t m, std::uint64_t seed);
/// Grand-bundle second-price auction on reported v(M).
Protocol vickrey_protocol(std::size_t m);
/// Grand bundle to the higher report, nobody pays.
Protocol zero_price_protocol(std::size_t m);

std::vector<std::string> protocol_names();
/// Throws std::invalid_argument for an unknown name. `seed` selects the member
/// of a randomized family and is ignored by deterministic protocols.
Protocol make_protocol(const std::string& name, std::size_t m, std::uint64_t seed = 0);

/// Bidder inputs for an instance: valuations vA, vB with S resp. T attached.
std::pair<BidderInput, BidderInput> bidder_inputs(const Instance& inst, const InstanceValuations& vals);

}  // namespace xoslab
