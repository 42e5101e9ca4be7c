// tests/test_data_formats.cpp

// Copyright 2026  The gsasv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <vector>

#include "doctest.h"
#include "gsasv/embedding.hpp"
#include "gsasv/errors.hpp"
#include "gsasv/eval.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/metadata.hpp"
#include "gsasv/trainer.hpp"
#include "test_util.hpp"

using namespace gsasv;
using gsasv_test::TempDir;

namespace {

Metadata sample_metadata() {
  Metadata meta;
  meta.vocabs["attack"] = {"a1", "a2"};
  meta.vocabs["vocoder"] = {"v1"};
  meta.vocabs["synthesizer"] = {"s1", "s2", "s3"};
  meta.vocabs["wavegen"] = {"w1"};
  UtteranceRecord bona;
  bona.utt_id = "u1";
  bona.speaker_id = "spk1";
  bona.kind = UttKind::kBonafide;
  UtteranceRecord spoof;
  spoof.utt_id = "u2";
  spoof.speaker_id = "spk1";
  spoof.kind = UttKind::kSpoof;
  spoof.attack = "a2";
  spoof.vocoder = "v1";
  spoof.synthesizer = "s3";
  spoof.wavegen = "w1";
  meta.records = {bona, spoof};
  meta.rebuild_index();
  return meta;
}

}  // namespace

TEST_SUITE("data_formats") {
  TEST_CASE("embedding store round trips bit exact") {
    TempDir dir;
    EmbeddingStore store(3);
    store.add("utt-a", std::vector<float>{1.0f, -2.5f, 0.125f});
    store.add("utt-b", std::vector<float>{0.0f, 3.25f, -7.0f});
    const std::string path = dir.file("emb.bin");
    write_embeddings(store, path);
    const EmbeddingStore back = read_embeddings(path);
    CHECK(back.dim() == 3);
    CHECK(back.count() == 2);
    CHECK(back.ids() == store.ids());
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t d = 0; d < 3; ++d) CHECK(back.vec_at(i)[d] == store.vec_at(i)[d]);
    }
  }

  TEST_CASE("embedding store rejects duplicates and bad dimensions") {
    EmbeddingStore store(2);
    store.add("u", std::vector<float>{1.0f, 2.0f});
    CHECK_THROWS_AS(store.add("u", std::vector<float>{3.0f, 4.0f}), DataError);
    CHECK_THROWS_AS(store.add("v", std::vector<float>{1.0f}), DataError);
    try {
      store.vec("missing");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
  }

  TEST_CASE("a corrupted embedding file fails the checksum") {
    TempDir dir;
    EmbeddingStore store(2);
    store.add("u", std::vector<float>{1.5f, 2.5f});
    const std::string path = dir.file("emb.bin");
    write_embeddings(store, path);
    std::string bytes = read_file(path);
    bytes[bytes.size() - 6] = static_cast<char>(bytes[bytes.size() - 6] ^ 0x01);
    atomic_write_file(path, bytes);
    CHECK_THROWS_AS(read_embeddings(path), FormatError);
  }

  TEST_CASE("a truncated embedding file is rejected") {
    TempDir dir;
    EmbeddingStore store(2);
    store.add("u", std::vector<float>{1.5f, 2.5f});
    const std::string path = dir.file("emb.bin");
    write_embeddings(store, path);
    const std::string bytes = read_file(path);
    atomic_write_file(path, bytes.substr(0, 9));
    CHECK_THROWS_AS(read_embeddings(path), FormatError);
  }

  TEST_CASE("metadata round trips through tsv") {
    TempDir dir;
    const Metadata meta = sample_metadata();
    const std::string path = dir.file("meta.tsv");
    write_metadata(meta, path);
    const Metadata back = read_metadata(path);
    REQUIRE(back.records.size() == 2);
    CHECK(back.vocabs == meta.vocabs);
    CHECK(back.record("u1").kind == UttKind::kBonafide);
    CHECK(back.record("u1").attack.empty());
    CHECK(back.record("u2").kind == UttKind::kSpoof);
    CHECK(back.record("u2").synthesizer == "s3");
    CHECK(back.record("u2").attr_label(AttrKind::kAttack) == "a2");
    CHECK(back.has_record("u2"));
    CHECK(!back.has_record("u3"));
  }

  TEST_CASE("metadata parse errors carry the line number") {
    TempDir dir;
    const std::string path = dir.file("bad.tsv");
    atomic_write_file(path, "#vocab attack a1\nu1\tspk1\tbonafide\t-\t-\t-\n");
    try {
      read_metadata(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("a spoof label outside the vocabulary is a vocab error") {
    TempDir dir;
    const std::string path = dir.file("vocab.tsv");
    atomic_write_file(path,
                      "#vocab attack a1\n#vocab vocoder v1\n#vocab synthesizer s1\n"
                      "#vocab wavegen w1\n"
                      "u1\tspk1\tspoof\tzz\tv1\ts1\tw1\n");
    CHECK_THROWS_AS(read_metadata(path), VocabError);
  }

  TEST_CASE("attribute encoding uses index zero for bonafide") {
    const Metadata meta = sample_metadata();
    const std::vector<std::string>& vocab = meta.vocab(AttrKind::kAttack);
    const std::vector<double> bona = encode_attribute(meta.record("u1"), AttrKind::kAttack, vocab);
    REQUIRE(bona.size() == 3);
    CHECK(bona[0] == 1.0);
    CHECK(bona[1] == 0.0);
    const std::vector<double> spoof = encode_attribute(meta.record("u2"), AttrKind::kAttack, vocab);
    CHECK(spoof[0] == 0.0);
    CHECK(spoof[2] == 1.0);
  }

  TEST_CASE("encoding an unknown label is a vocab error") {
    Metadata meta = sample_metadata();
    meta.records[1].attack = "other";
    meta.rebuild_index();
    CHECK_THROWS_AS(
        encode_attribute(meta.records[1], AttrKind::kAttack, meta.vocab(AttrKind::kAttack)),
        VocabError);
  }

  TEST_CASE("attribute kind names round trip") {
    for (AttrKind k : all_attr_kinds()) CHECK(attr_kind_from_name(attr_kind_name(k)) == k);
    CHECK_THROWS_AS(attr_kind_from_name("pitch"), ConfigError);
  }

  TEST_CASE("score files round trip") {
    TempDir dir;
    const std::vector<TrialPair> trials = {
        {"e1", "t1", TrialLabel::kTarget},
        {"e1", "t2", TrialLabel::kNontarget},
        {"e2", "t3", TrialLabel::kSpoof},
    };
    const std::vector<double> scores = {1.25, -0.5, 0.0};
    const std::string path = dir.file("scores.tsv");
    write_scores(trials, scores, path);
    const std::vector<ScoredTrial> back = read_scores(path);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back[i].trial == trials[i]);
      CHECK(back[i].score == doctest::Approx(scores[i]).epsilon(1e-9));
    }
    CHECK(scores_to_tsv(trials, scores).find("1.250000") != std::string::npos);
  }

  TEST_CASE("train log renders dashes for absent components") {
    TrainLog log;
    EpochLog e;
    e.epoch = 0;
    e.lr = 0.001;
    e.loss_total = 1.5;
    e.loss_ce = 1.5;
    log.epochs.push_back(e);
    const std::string tsv = train_log_to_tsv(log);
    CHECK(tsv.find("#epoch\tlr\tloss_total\tloss_ce\tloss_reg\tloss_attr\n") == 0);
    CHECK(tsv.find("0\t0.001\t1.500000\t1.500000\t-\t-\n") != std::string::npos);
  }

  TEST_CASE("train log renders component losses when present") {
    TrainLog log;
    EpochLog e;
    e.epoch = 3;
    e.lr = 0.0005;
    e.loss_total = 2.0;
    e.loss_ce = 1.0;
    e.loss_reg = 0.5;
    e.loss_attr = 0.25;
    e.has_reg = true;
    e.has_attr = true;
    log.epochs.push_back(e);
    const std::string tsv = train_log_to_tsv(log);
    CHECK(tsv.find("3\t0.0005\t2.000000\t1.000000\t0.500000\t0.250000\n") != std::string::npos);
  }
}
