#include <doctest.h>

#include "dcsim/history.hpp"
#include "dcsim/oracles.hpp"
#include "dcsim/providers.hpp"
#include "support.hpp"

using namespace dcsim;

namespace {

// Consumer stand-in: forwards "send" to an oracle and records whatever the
// provider calls back with.
class Sink final : public Contract {
 public:
  std::string kind() const override { return "storage-oracle"; }
  Bytes invoke(CallContext& ctx, std::string_view fn, ByteView payload) override {
    if (fn == "forward") {
      AbiReader r(payload);
      const Address to{r.word()};
      const auto function = r.text();
      return ctx.call(to, function, r.rest());
    }
    if (fn == "oracle_callback" || fn == "push") {
      received.push_back({ctx.block_time(), std::string(fn), Bytes(payload.begin(), payload.end())});
      return {};
    }
    throw Revert("unknown");
  }
  std::unique_ptr<Contract> clone() const override { return std::make_unique<Sink>(*this); }

  struct Call {
    Timestamp at;
    std::string fn;
    Bytes payload;
  };
  std::vector<Call> received;
};

const auto kCond = expr::parse("d_w >= 2");

struct Rig {
  explicit Rig(OracleVariant v) : chain(GasSchedule::defaults(), 72), variant(v) {
    oracle = deploy_oracle(chain, v, "d_w", 0);
    sink = chain.deploy(std::make_unique<Sink>());
    me = chain.new_account();
  }

  // Mines up to and including block `to`, feeding the d_w column of the
  // running example.
  void replay_until(Timestamp to) {
    static const DataWord dw[] = {0, 1, 1, 1, 2, 2};
    while (chain.height() < to) {
      const Timestamp next = chain.height() + 1;
      if (next >= 73 && next <= 78) oracle.provider->update(dw[next - 73], next);
      chain.step();
    }
  }

  void forward(std::string fn, const Bytes& args) {
    AbiWriter w;
    w.word(oracle.contract.value).text(fn).raw(args);
    chain.submit({me, sink, "forward", w.take(), 0});
  }

  Sink& sink_state() { return chain.contract_as<Sink>(sink); }

  Chain chain;
  OracleVariant variant;
  OracleInstance oracle;
  Address sink;
  Address me;
};

}  // namespace

TEST_SUITE("history") {

TEST_CASE("change points only") {
  ValueHistory h(0);
  CHECK_FALSE(h.record(73, 0));
  CHECK(h.record(74, 1));
  CHECK_FALSE(h.record(75, 1));
  CHECK(h.record(77, 2));
  CHECK(h.entries().size() == 3);
  CHECK_THROWS_AS(h.record(77, 3), ContractViolation);
  CHECK(h.index_at(76) == 1);
  CHECK(h.index_at(0) == 0);
}

TEST_CASE("slice re-stamps the entry in effect") {
  ValueHistory h(0);
  h.record(74, 1);
  h.record(77, 2);
  CHECK(h.slice(73) == std::vector<HistoryEntry>{{73, 0}, {74, 1}, {77, 2}});
  CHECK(h.slice(75) == std::vector<HistoryEntry>{{75, 1}, {77, 2}});
  CHECK(h.slice(80) == std::vector<HistoryEntry>{{80, 2}});
  CHECK(earliest_true(h.slice(73), kCond, "d_w") == 77);
  CHECK(earliest_true(h.slice(73), expr::parse("d_w > 5"), "d_w") == kTop);
}

TEST_CASE("history encoding round trip and rejects disorder") {
  AbiWriter w;
  encode_history(w, std::vector<HistoryEntry>{{73, 0}, {74, 1}});
  const auto bytes = w.take();
  AbiReader r(bytes);
  CHECK(decode_history(r) == std::vector<HistoryEntry>{{73, 0}, {74, 1}});

  AbiWriter bad;
  encode_history(bad, std::vector<HistoryEntry>{{74, 0}, {73, 1}});
  const auto bad_bytes = bad.take();
  AbiReader br(bad_bytes);
  CHECK_THROWS_AS(decode_history(br), DecodeError);
}

}  // TEST_SUITE

TEST_SUITE("oracles") {

TEST_CASE("on-chain history returns the slice from the activation") {
  Rig rig({Architecture::OnChainHistory, false});
  rig.replay_until(78);
  const auto out = rig.chain.view(rig.oracle.contract, "query",
                                  encode_query_params(rig.variant, 73, kCond));
  AbiReader r(out);
  CHECK(decode_history(r) == std::vector<HistoryEntry>{{73, 0}, {74, 1}, {77, 2}});
}

TEST_CASE("conditional on-chain history returns the earliest true timestamp") {
  Rig rig({Architecture::OnChainHistory, true});
  rig.replay_until(78);
  auto out = rig.chain.view(rig.oracle.contract, "query", encode_query_params(rig.variant, 73, kCond));
  CHECK(AbiReader(out).word() == 77);
  out = rig.chain.view(rig.oracle.contract, "query",
                       encode_query_params(rig.variant, 73, expr::parse("d_w == 7")));
  CHECK(AbiReader(out).word() == kTop);
}

TEST_CASE("conditional storage only sees the current value") {
  Rig rig({Architecture::Storage, true});
  rig.replay_until(76);
  const auto params = encode_query_params(rig.variant, 0, kCond);
  CHECK_FALSE(AbiReader(rig.chain.view(rig.oracle.contract, "query", params)).boolean());
  rig.replay_until(77);
  CHECK(AbiReader(rig.chain.view(rig.oracle.contract, "query", params)).boolean());
}

TEST_CASE("conditions over other variables are refused") {
  Rig rig({Architecture::Storage, true});
  CHECK_THROWS_AS(rig.chain.view(rig.oracle.contract, "query",
                                 encode_query_params(rig.variant, 0, expr::parse("other > 1"))),
                  Revert);
}

TEST_CASE("off-chain history answers with a callback one block later") {
  Rig rig({Architecture::OffChainHistory, false});
  rig.replay_until(74);
  AbiWriter args;
  args.word(42).raw(encode_query_params(rig.variant, 75, kCond));
  rig.replay_until(77);
  rig.forward("request", args.take());
  rig.replay_until(79);
  const auto& got = rig.sink_state().received;
  REQUIRE(got.size() == 1);
  CHECK(got[0].fn == "oracle_callback");
  CHECK(got[0].at == 79);
  AbiReader r(got[0].payload);
  CHECK(r.word() == 42);
  CHECK(decode_history(r) == std::vector<HistoryEntry>{{75, 1}, {77, 2}});
}

TEST_CASE("request/response answers from the value at the request's block") {
  Rig rig({Architecture::RequestResponse, true});
  rig.replay_until(76);
  AbiWriter args;
  args.word(7).raw(encode_query_params(rig.variant, 0, kCond));
  rig.forward("request", args.take());
  rig.replay_until(78);
  const auto& got = rig.sink_state().received;
  REQUIRE(got.size() == 1);
  CHECK(got[0].at == 78);
  AbiReader r(got[0].payload);
  CHECK(r.word() == 7);
  CHECK(r.boolean());  // request mined at 77, where d_w = 2
}

TEST_CASE("malformed requests revert in the caller's transaction") {
  Rig rig({Architecture::OffChainHistory, true});
  rig.forward("request", AbiWriter().word(1).word(73).text("d_w >=").take());
  rig.chain.step();
  CHECK_FALSE(rig.chain.receipts().back().ok());
  rig.chain.step();
  CHECK(rig.sink_state().received.empty());
}

TEST_CASE("a callback to an external account reverts") {
  Rig rig({Architecture::RequestResponse, false});
  AbiWriter args;
  args.word(1);
  rig.chain.submit({rig.me, rig.oracle.contract, "request", args.take(), 0});
  rig.chain.step();
  const auto block = rig.chain.step();
  REQUIRE(block.size() == 1);
  CHECK(block[0].tx.function == "oracle_callback");
  CHECK_FALSE(block[0].ok());
}

TEST_CASE("sync oracles reject async calls") {
  Rig rig({Architecture::Storage, false});
  CHECK_THROWS_AS(rig.chain.view(rig.oracle.contract, "request", AbiWriter().word(1).take()), Revert);
  Rig async({Architecture::RequestResponse, false});
  CHECK_THROWS_AS(async.chain.view(async.oracle.contract, "query"), Revert);
}

TEST_CASE("pub-sub pushes a snapshot, then every change") {
  Rig rig({Architecture::PubSub, false});
  rig.forward("subscribe", {});
  rig.replay_until(78);
  const auto& got = rig.sink_state().received;
  // snapshot of 0 (queued while block 73 was processed), the change at 74, the change at 77
  REQUIRE(got.size() == 3);
  CHECK(AbiReader(got[0].payload).word() == rig.oracle.contract.value);
  std::vector<std::pair<Timestamp, DataWord>> seen;
  for (const auto& c : got) {
    AbiReader r(c.payload);
    r.word();
    seen.emplace_back(c.at, r.word());
  }
  CHECK(seen == std::vector<std::pair<Timestamp, DataWord>>{{74, 0}, {74, 1}, {77, 2}});
}

TEST_CASE("conditional pub-sub signals the crossing time once") {
  Rig rig({Architecture::PubSub, true});
  rig.replay_until(72);
  rig.forward("subscribe", AbiWriter().text("d_w >= 2").take());
  rig.replay_until(80);
  const auto& got = rig.sink_state().received;
  REQUIRE(got.size() == 2);
  AbiReader snap(got[0].payload);
  snap.word();
  CHECK(snap.word() == kTop);  // condition false at subscription
  AbiReader sig(got[1].payload);
  sig.word();
  CHECK(sig.word() == 77);
  CHECK(got[1].at == 77);
}

TEST_CASE("conditional subscription after the crossing carries its own block") {
  Rig rig({Architecture::PubSub, true});
  rig.replay_until(77);
  rig.forward("subscribe", AbiWriter().text("d_w >= 2").take());
  rig.replay_until(80);
  const auto& got = rig.sink_state().received;
  REQUIRE(got.size() == 1);
  AbiReader r(got[0].payload);
  r.word();
  CHECK(r.word() == 78);
}

TEST_CASE("duplicate subscriptions revert, unsubscribe stops pushes") {
  Rig rig({Architecture::PubSub, false});
  rig.forward("subscribe", {});
  rig.chain.step();
  rig.forward("subscribe", {});
  rig.chain.step();
  CHECK_FALSE(rig.chain.receipts().back().ok());
  auto& provider = dynamic_cast<PubSubOracleProvider&>(*rig.oracle.provider);
  CHECK(provider.active_subscribers() == 1);

  rig.forward("unsubscribe", {});
  rig.chain.step();
  CHECK(provider.active_subscribers() == 0);
  CHECK_FALSE(rig.chain.contract_as<PubSubOracle>(rig.oracle.contract).is_subscribed(rig.sink));
  const auto before = rig.sink_state().received.size();
  rig.oracle.provider->update(9, rig.chain.height() + 1);
  rig.chain.step();
  rig.chain.step();
  CHECK(rig.sink_state().received.size() == before);
}

TEST_CASE("provider guards") {
  Rig rig({Architecture::Storage, false});
  rig.chain.step();
  CHECK_THROWS_AS(rig.oracle.provider->update(1, rig.chain.height()), ContractViolation);
  rig.oracle.provider->update(1, rig.chain.height() + 2);
  CHECK_THROWS_AS(rig.oracle.provider->update(2, rig.chain.height() + 1), ContractViolation);
  Chain chain;
  CHECK_THROWS_AS(deploy_oracle(chain, {Architecture::Storage, false}, "x", 0, {0}), ValidationError);
}

TEST_CASE("sync providers land the update in the requested block") {
  Rig rig({Architecture::Storage, false});
  rig.oracle.provider->update(5, 75);
  for (int i = 0; i < 2; ++i) rig.chain.step();
  CHECK(rig.chain.contract_as<StorageOracle>(rig.oracle.contract).value() == 0);
  rig.chain.step();
  CHECK(rig.chain.contract_as<StorageOracle>(rig.oracle.contract).value() == 5);
}

}  // TEST_SUITE
