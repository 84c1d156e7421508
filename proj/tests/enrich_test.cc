//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "mia/enrich.hpp"

#include <string>
#include <vector>

#include "fake_server.hpp"
#include "gtest/gtest.h"
#include "mia/attacks.hpp"
#include "test_util.hpp"

namespace mia {
namespace {

using ::mia::testing::FakeScoreBody;
using ::mia::testing::FakeScoringServer;
using ::mia::testing::MakeSample;

ScoringEndpoint EndpointFor(const FakeScoringServer& server,
                            int max_parallel = 4) {
  ScoringEndpoint endpoint;
  endpoint.base_url = server.url();
  endpoint.timeout = std::chrono::milliseconds(5000);
  endpoint.max_parallel = max_parallel;
  endpoint.retry.backoff_base = std::chrono::milliseconds(1);
  return endpoint;
}

ScoredSample TextSample(const std::string& id, const std::string& text) {
  ScoredSample::Fields fields;
  fields.id = id;
  fields.label = Label::kMember;
  fields.text = text;
  fields.token_logprobs = {-1.0, -2.0};
  return MakeSample(std::move(fields));
}

LogprobSequence Expected(const std::string& text) {
  const nlohmann::json body = FakeScoreBody(text);
  LogprobSequence out;
  for (const auto& v : body["token_logprobs"]) {
    if (!v.is_null()) out.push_back(v.get<double>());
  }
  return out;
}

TEST(EnrichTest, NoNeedsIsIdentity) {
  FakeScoringServer server;
  const ScoredSample sample = TextSample("a", "Hello World");
  EXPECT_EQ(Enrich(sample, EndpointFor(server), {}, 5, 0).value(), sample);
  EXPECT_EQ(server.requests(), 0);
}

TEST(EnrichTest, LowercaseOfLowercaseTextMatchesDirectFetch) {
  FakeScoringServer server;
  const std::string text = "already lower case text";
  const ScoredSample out =
      Enrich(TextSample("a", text), EndpointFor(server),
             {.lowercase = true}, 5, 0)
          .value();
  const FetchedLogprobs direct =
      FetchLogprobs(EndpointFor(server), text).value();
  EXPECT_EQ(*out.lowercase_logprobs(), direct.token_logprobs);
  // Lowercasing changes nothing, so the ratio is exactly one.
  ScoredSample::Fields fields = out.fields();
  fields.token_logprobs = direct.token_logprobs;
  EXPECT_EQ(ScoreLowercase(MakeSample(fields)).value().raw, 1.0);
}

TEST(EnrichTest, LowercaseSendsLoweredText) {
  FakeScoringServer server;
  const ScoredSample out =
      Enrich(TextSample("a", "The \xc3\x89T\xc3\x89 Cat"), EndpointFor(server),
             {.lowercase = true}, 5, 0)
          .value();
  EXPECT_EQ(server.texts(),
            (std::vector<std::string>{"the \xc3\xa9t\xc3\xa9 cat"}));
  EXPECT_EQ(*out.lowercase_logprobs(), Expected("the \xc3\xa9t\xc3\xa9 cat"));
}

TEST(EnrichTest, NeighborsAreDeterministic) {
  FakeScoringServer server;
  const ScoredSample sample =
      TextSample("doc-1", "one two three four five six seven");
  const EnrichNeeds needs{.neighbors = true};
  const ScoredSample a = Enrich(sample, EndpointFor(server), needs, 3, 42).value();
  const ScoredSample b = Enrich(sample, EndpointFor(server, 1), needs, 3, 42).value();
  ASSERT_EQ(a.neighbor_logprobs()->size(), 3u);
  EXPECT_EQ(a, b);
  const std::vector<std::string> texts =
      PerturbWords(*sample.text(), 3, SampleSeed(42, "doc-1")).value();
  for (size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ((*a.neighbor_logprobs())[i], Expected(texts[i]));
  }
}

TEST(EnrichTest, ExistingAuxIsKept) {
  FakeScoringServer server;
  ScoredSample::Fields fields = TextSample("a", "x y z").fields();
  fields.lowercase_logprobs = LogprobSequence{-9.0};
  const ScoredSample sample = MakeSample(fields);
  const ScoredSample out =
      Enrich(sample, EndpointFor(server),
             {.lowercase = true, .neighbors = true}, 2, 0)
          .value();
  EXPECT_EQ(*out.lowercase_logprobs(), (LogprobSequence{-9.0}));
  EXPECT_EQ(out.neighbor_logprobs()->size(), 2u);
  EXPECT_EQ(server.requests(), 2);
}

TEST(EnrichTest, MissingText) {
  FakeScoringServer server;
  const auto out = Enrich(MakeSample({-1.0}, "bare"), EndpointFor(server),
                          {.lowercase = true}, 1, 0);
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kMissingText);
  EXPECT_NE(out.status().message().find("bare"), std::string::npos);
}

TEST(EnrichTest, SingleTokenResponseIsEmptySequence) {
  FakeScoringServer server;
  const auto out = Enrich(TextSample("solo", "word"), EndpointFor(server),
                          {.lowercase = true}, 1, 0);
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kEmptySequence);
}

TEST(EnrichTest, FailureDiscardsBatch) {
  FakeScoringServer server([](const std::string& text, httplib::Response& res) {
    if (text.find("poison") != std::string::npos) {
      res.status = 400;
      res.set_content(R"({"error":"rejected"})", "application/json");
      return;
    }
    res.set_content(FakeScoreBody(text).dump(), "application/json");
  });
  const std::vector<ScoredSample> batch = {TextSample("ok", "a b c"),
                                           TextSample("bad", "a poison c")};
  const auto out =
      EnrichAll(batch, EndpointFor(server), {.lowercase = true}, 1, 0);
  EXPECT_EQ(ErrorKindOf(out.status()), ErrorKind::kProtocolError);
  EXPECT_NE(out.status().message().find("'bad'"), std::string::npos);
}

TEST(EnrichTest, ConcurrencyIsBounded) {
  FakeScoringServer server;
  server.set_delay_ms(20);
  std::vector<ScoredSample> batch;
  for (int i = 0; i < 4; ++i) {
    batch.push_back(TextSample("s" + std::to_string(i),
                               "alpha beta gamma delta " + std::to_string(i)));
  }
  const auto out = EnrichAll(batch, EndpointFor(server, 3),
                             {.lowercase = true, .neighbors = true}, 3, 5);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(server.requests(), 16);
  EXPECT_LE(server.max_in_flight(), 3);
  EXPECT_GE(server.max_in_flight(), 2);
  const auto serial = EnrichAll(batch, EndpointFor(server, 1),
                                {.lowercase = true, .neighbors = true}, 3, 5);
  EXPECT_EQ(*out, *serial);
}

TEST(EnrichTest, InvalidNeighborCount) {
  FakeScoringServer server;
  EXPECT_EQ(ErrorKindOf(Enrich(TextSample("a", "x y"), EndpointFor(server),
                               {.neighbors = true}, 0, 0)
                            .status()),
            ErrorKind::kInvalidConfig);
}

}  // namespace
}  // namespace mia
