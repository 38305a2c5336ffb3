// Copyright 2026 The hopeclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "hope/corpus.hpp"
#include "hope/fileio.hpp"
#include "hope/textclean.hpp"
#include "test_support.hpp"

using namespace hope;

TEST_CASE("labels parse leniently and serialize canonically") {
  CHECK(parse_label("Hope") == Label::Hope);
  CHECK(parse_label("  not   HOPE ") == Label::NotHope);
  CHECK(parse_label("Not Hope") == Label::NotHope);
  CHECK_FALSE(parse_label("maybe").has_value());
  CHECK(to_string(Label::Hope) == "Hope");
  CHECK(to_string(Label::NotHope) == "Not Hope");
  CHECK(to_index(Label::NotHope) == 0);
  CHECK(to_index(Label::Hope) == 1);
  CHECK(label_from_index(1) == Label::Hope);
  CHECK_THROWS(label_from_index(2));
}

TEST_CASE("parse_split reads columns in any order and ignores extras") {
  const auto s = parse_split("label,extra,text,id\nHope,x,\"a, b\",7\nNot Hope,y,c,8\n",
                             SplitName::Train, true);
  REQUIRE(s.size() == 2);
  CHECK(s[0].id == "7");
  CHECK(s[0].text == "a, b");
  CHECK(s[1].label == Label::NotHope);
  CHECK(s.fully_labeled());
}

TEST_CASE("parse_split errors name the offending instance") {
  CHECK_THROWS_AS(parse_split("id,text,label\n1,a,Hope\n1,b,Hope\n", SplitName::Train, true),
                  DuplicateIdError);
  try {
    parse_split("id,text,label\n9,a,Hopeful\n", SplitName::Train, true);
    FAIL("expected UnknownLabelError");
  } catch (const UnknownLabelError& e) {
    CHECK(e.id() == "9");
    CHECK(e.value() == "Hopeful");
  }
  CHECK_THROWS_AS(parse_split("id,text,label\n1,a,\n", SplitName::Train, true), MissingLabelError);
  CHECK_THROWS_AS(parse_split("id,text\n1,a\n", SplitName::Train, true), MissingLabelError);
  CHECK_THROWS_AS(parse_split("id,text,label\n1,a\n", SplitName::Train, false), MalformedRowError);
  CHECK_THROWS_AS(parse_split("id,body\n1,a\n", SplitName::Train, false), MalformedRowError);
  CHECK_THROWS_AS(load_split("/nonexistent/x.csv", SplitName::Dev, false), MissingFileError);
}

TEST_CASE("unlabeled test splits load without labels") {
  const auto s = parse_split("id,text\n1,a\n2,b\n", SplitName::Test, false);
  CHECK_FALSE(s.any_labeled());
  const auto c = split_statistics(s);
  CHECK(c == ClassCounts{2, 0, 0});
  CHECK(split_statistics(parse_split("", SplitName::Test, false)) == ClassCounts{0, 0, 0});
}

TEST_CASE("serialize_split round-trips, including awkward text") {
  const DatasetSplit s(SplitName::Dev, {{"a", "line one\nline \"two\", yes", Label::Hope},
                                        {"b", "", Label::NotHope}});
  CHECK(parse_split(serialize_split(s), SplitName::Dev, true) == s);
  CHECK(parse_split(serialize_split(s, '\t'), SplitName::Dev, true, '\t') == s);
  const DatasetSplit unlabeled(SplitName::Test, {{"x", "t", std::nullopt}});
  CHECK(serialize_split(unlabeled).rfind("id,text\n", 0) == 0);
}

TEST_CASE("reference counts match the published class tables") {
  CHECK(find_reference_counts("polyhope-en-train") == ClassCounts{4541, 2296, 2245});
  CHECK(find_reference_counts("polyhope-en-dev") == ClassCounts{1650, 834, 816});
  CHECK(find_reference_counts("polyhope-en-test") == ClassCounts{2065, 0, 0});
  CHECK(find_reference_counts("polyhope-de-train") == ClassCounts{11573, 4924, 6649});
  CHECK(find_reference_counts("polyhope-de-dev") == ClassCounts{4208, 1790, 2418});
  CHECK(find_reference_counts("polyhope-de-test") == ClassCounts{5262, 0, 0});
  CHECK_FALSE(find_reference_counts("polyhope-es-train").has_value());
  for (const auto& r : reference_counts()) {
    CHECK(r.counts.hope + r.counts.not_hope <= r.counts.total);
  }
}

TEST_CASE("verify_expected_counts lists every differing field") {
  const auto ok = verify_expected_counts({10, 6, 4}, {10, 6, 4});
  CHECK(ok.passed);
  const auto bad = verify_expected_counts({10, 7, 3}, {10, 6, 4});
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.diffs.size() == 2);
  CHECK(bad.diffs[0].field == "hope");
  CHECK(bad.to_key_value("v.").get_string("v.status") == "fail");
  CHECK(bad.to_key_value().get_int("diff.not_hope") == -1);
}

TEST_CASE("the toy corpus is balanced and separable by the word hope") {
  const auto s = load_split(test::data_dir() / "toy_train.csv", SplitName::Train, true);
  CHECK(s.size() == 32);
  CHECK(split_statistics(s) == ClassCounts{32, 16, 16});
  for (const auto& inst : s.instances()) {
    const bool has = clean(inst.text).value().find("hope") != std::string::npos;
    CHECK(has == (inst.label == Label::Hope));
  }
}
