/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vecaxis/error.hpp"
#include "vecaxis/filtering.hpp"

using namespace vecaxis;

namespace {

EmbeddingSpace space_from(const std::string& text, bool frequency_sorted = true) {
    std::istringstream in(text);
    auto s = load_space(in, "t");
    return frequency_sorted ? s : s.with_frequency_sorted(false);
}

Error error_of(std::string_view text, const NamedSets& sets = default_named_sets()) {
    try {
        parse_filter(text, sets);
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "parsed: " << text;
    return Error(ErrorKind::InvalidArgument, "");
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

const std::vector<std::string> kAbc{"a", "b", "c"};

}  // namespace

TEST(Filter, RankAtMostTakesLeadingLabels) {
    auto s = space_from("a 1 0\nb 0 1\nc 1 1\n");
    EXPECT_EQ(apply_filter(s, FilterRule::rank_at_most(2)).labels, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(apply_filter(s, FilterRule::rank_greater_than(2)).labels, (std::vector<std::string>{"c"}));
    EXPECT_EQ(apply_filter(s, FilterRule::rank_at_most(0)).labels, std::vector<std::string>{});
}

TEST(Filter, SimilarityMatchesBruteForce) {
    auto s = normalize(space_from("horse 1 0\nx 0.9 0.1\ny 0.2 0.8\nz -1 0\nw 0.6 0.5\n"));
    auto rule = FilterRule::similarity(parse_formula("horse"), Measure::Cosine, CompareOp::Gt, 0.5);
    std::vector<std::string> want;
    for (const auto& l : s.labels()) {
        auto v = s.lookup(l);
        if (v[0] / std::hypot(v[0], v[1]) > 0.5) want.push_back(l);
    }
    EXPECT_EQ(apply_filter(s, rule).labels, want);
    EXPECT_EQ(want, (std::vector<std::string>{"horse", "x", "w"}));
}

TEST(Filter, MetadataComparisons) {
    auto s = space_from("a 1 0\nb 0 1\nc 1 1\n");
    MetadataTable t;
    t.set("a", "pos", std::string("NOUN"));
    t.set("b", "pos", std::string("VERB"));
    t.set("a", "freq", std::int64_t(10));
    t.set("b", "freq", 2.5);
    t.set("c", "freq", std::int64_t(3));
    s = attach_metadata(s, t).space;

    auto r = apply_filter(s, parse_filter("pos == \"NOUN\""));
    EXPECT_EQ(r.labels, std::vector<std::string>{"a"});
    ASSERT_EQ(r.warnings.size(), 1u);  // c lacks pos
    EXPECT_NE(r.warnings[0].find("missing for 1"), std::string::npos);

    EXPECT_EQ(apply_filter(s, parse_filter("freq > 2.9")).labels, (std::vector<std::string>{"a", "c"}));
    EXPECT_EQ(apply_filter(s, parse_filter("freq <= 3")).labels, (std::vector<std::string>{"b", "c"}));
    EXPECT_EQ(apply_filter(s, parse_filter("pos != \"NOUN\"")).labels, std::vector<std::string>{"b"});

    // text against number: type mismatch is false with a warning
    auto mismatch = apply_filter(s, parse_filter("pos < 3"));
    EXPECT_TRUE(mismatch.labels.empty());
    EXPECT_FALSE(mismatch.warnings.empty());

    auto unknown = apply_filter(s, parse_filter("color == \"red\""));
    EXPECT_TRUE(unknown.labels.empty());
    ASSERT_EQ(unknown.warnings.size(), 1u);
    EXPECT_NE(unknown.warnings[0].find("unknown metadata field 'color'"), std::string::npos);
}

TEST(Filter, NotOfMissingFieldIsComplement) {
    auto s = space_from("a 1 0\nb 0 1\nc 1 1\n");
    MetadataTable t;
    t.set("a", "pos", std::string("NOUN"));
    s = attach_metadata(s, t).space;
    EXPECT_EQ(apply_filter(s, parse_filter("not pos == \"NOUN\"")).labels, (std::vector<std::string>{"b", "c"}));
}

TEST(Filter, LabelSets) {
    auto s = space_from("the 1 0\nking 0 1\nand 1 1\nqueen 1 2\n");
    EXPECT_EQ(apply_filter(s, parse_filter("not in(@stopwords)")).labels, (std::vector<std::string>{"king", "queen"}));
    EXPECT_EQ(apply_filter(s, parse_filter("in(@stopwords)")).labels, (std::vector<std::string>{"the", "and"}));
    EXPECT_EQ(apply_filter(s, parse_filter("in(\"queen\", \"king\", \"absent\")")).labels,
              (std::vector<std::string>{"king", "queen"}));
    NamedSets sets;
    sets["royal"] = std::make_shared<LabelSet>(LabelSet{"queen"});
    EXPECT_EQ(apply_filter(s, parse_filter("in(@royal) or rank <= 1", sets)).labels,
              (std::vector<std::string>{"the", "queen"}));
}

TEST(Filter, StopwordListIsTheBundledFixture) {
    const auto& sw = english_stopwords();
    EXPECT_EQ(sw.size(), 179u);
    for (const char* w : {"the", "a", "and", "of", "not", "wouldn't", "y"}) EXPECT_TRUE(sw.contains(w)) << w;
    for (const char* w : {"king", "google", "The"}) EXPECT_FALSE(sw.contains(w)) << w;
}

TEST(Filter, RankWarnsOnUnsortedSpaceWithoutRankField) {
    auto s = space_from("a 1 0\nb 0 1\nc 1 1\n", false);
    auto r = apply_filter(s, FilterRule::rank_at_most(1));
    EXPECT_EQ(r.labels, std::vector<std::string>{"a"});
    ASSERT_EQ(r.warnings.size(), 1u);

    MetadataTable t;
    t.set("a", "rank", std::int64_t(3));
    t.set("b", "rank", std::int64_t(1));
    t.set("c", "rank", std::int64_t(2));
    auto ranked = attach_metadata(s, t).space;
    auto rr = apply_filter(ranked, FilterRule::rank_at_most(2));
    EXPECT_EQ(rr.labels, (std::vector<std::string>{"b", "c"}));
    EXPECT_TRUE(rr.warnings.empty());
}

TEST(Filter, ZeroVectorsAndZeroAxes) {
    auto s = space_from("a 1 0\nzero 0 0\nc 0 1\n");
    auto r = apply_filter(s, parse_filter("sim(cos, a) > -2"));
    EXPECT_EQ(r.labels, (std::vector<std::string>{"a", "c"}));
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_THROW(apply_filter(s, parse_filter("sim(cos, zero) > 0")), Error);
    try {
        apply_filter(s, parse_filter("sim(cos, zero) > 0"));
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroNorm);
    }
    // dot has no such restriction
    EXPECT_EQ(apply_filter(s, parse_filter("sim(dot, zero) == 0")).labels, (std::vector<std::string>{"a", "zero", "c"}));
}

TEST(Filter, UnknownFormulaLabelThrows) {
    auto s = space_from("a 1 0\n");
    try {
        apply_filter(s, parse_filter("sim(cos, a - ghost) > 0"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownLabel);
        EXPECT_EQ(e.subject(), "ghost");
    }
}

// ---------------------------------------------------------------------------
// parser

TEST(FilterParse, Structure) {
    EXPECT_EQ(parse_filter("rank <= 2"), FilterRule::rank_at_most(2));
    EXPECT_EQ(parse_filter("rank > 500"), FilterRule::rank_greater_than(500));
    EXPECT_EQ(parse_filter("rank < 3"), FilterRule::rank_at_most(2));
    EXPECT_EQ(parse_filter("rank >= 3"), FilterRule::rank_greater_than(2));
    EXPECT_EQ(parse_filter("rank == 3"),
              FilterRule::all_of({FilterRule::rank_at_most(3), FilterRule::rank_greater_than(2)}));
    EXPECT_EQ(parse_filter("rank != 3"),
              FilterRule::negate(FilterRule::all_of({FilterRule::rank_at_most(3), FilterRule::rank_greater_than(2)})));

    auto rule = parse_filter("sim(cos, avg(he,him)) > 0.3 or pos == \"VERB\"");
    ASSERT_EQ(rule.kind(), FilterRule::Kind::Or);
    ASSERT_EQ(rule.children().size(), 2u);
    const auto& sim = rule.children()[0];
    EXPECT_EQ(sim.kind(), FilterRule::Kind::Similarity);
    EXPECT_EQ(format(sim.formula()), "avg(he, him)");
    EXPECT_EQ(sim.measure(), Measure::Cosine);
    EXPECT_EQ(sim.op(), CompareOp::Gt);
    EXPECT_EQ(sim.threshold(), 0.3);
    EXPECT_EQ(rule.children()[1], FilterRule::meta("pos", CompareOp::Eq, std::string("VERB")));
}

TEST(FilterParse, PrecedenceAndAliases) {
    auto a = FilterRule::rank_at_most(1), b = FilterRule::rank_at_most(2), c = FilterRule::rank_at_most(3);
    EXPECT_EQ(parse_filter("rank<=1 or rank<=2 and rank<=3"), FilterRule::any_of({a, FilterRule::all_of({b, c})}));
    EXPECT_EQ(parse_filter("(rank<=1 || rank<=2) && rank<=3"), FilterRule::all_of({FilterRule::any_of({a, b}), c}));
    EXPECT_EQ(parse_filter("!rank<=1"), FilterRule::negate(a));
    EXPECT_EQ(parse_filter("not not rank<=1"), FilterRule::negate(FilterRule::negate(a)));
    EXPECT_EQ(parse_filter("rank<=1 and rank<=2 and rank<=3"), FilterRule::all_of({a, b, c}));
    EXPECT_EQ(parse_filter("x = 1"), FilterRule::meta("x", CompareOp::Eq, std::int64_t(1)));
    EXPECT_EQ(parse_filter("x <> 1.5"), FilterRule::meta("x", CompareOp::Ne, 1.5));
    EXPECT_EQ(parse_filter("x >= -2"), FilterRule::meta("x", CompareOp::Ge, std::int64_t(-2)));
}

TEST(FilterParse, CompoundExpression) {
    auto rule = parse_filter(
        "rank <= 30000 and sim(cos, \"google\") >= 0.4 and pos == \"NOUN\" and not in(@stopwords)");
    ASSERT_EQ(rule.kind(), FilterRule::Kind::And);
    ASSERT_EQ(rule.children().size(), 4u);
    EXPECT_EQ(rule.children()[3].kind(), FilterRule::Kind::NotInLabelSet);
    EXPECT_EQ(rule.children()[3].set_name(), "stopwords");
    EXPECT_EQ(rule.children()[3].labels().size(), 179u);
}

TEST(FilterParse, Errors) {
    EXPECT_EQ(error_of("sim(cos,)").kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(error_of("sim(cos,)").offset(), 8u);
    EXPECT_EQ(error_of("").kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(error_of("rank <= 2 and").offset(), 13u);
    EXPECT_EQ(error_of("rank <= 2.5").kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(error_of("(rank <= 2").offset(), 10u);
    EXPECT_EQ(error_of("pos ~ 1").offset(), 4u);
    EXPECT_EQ(error_of("rank <= 2 rank").offset(), 10u);
    EXPECT_EQ(error_of("sim(cosh, a) > 0").offset(), 4u);
    EXPECT_EQ(error_of("sim(cos, 2 * 3) > 0").kind(), ErrorKind::TypeError);
    // formula offsets are relative to the whole filter text
    EXPECT_EQ(error_of("sim(cos, avg(he,) > 0").offset(), 16u);

    auto unknown = error_of("rank < 3 and in(@colors)");
    EXPECT_EQ(unknown.kind(), ErrorKind::UnknownSetName);
    EXPECT_EQ(unknown.offset(), 16u);
    EXPECT_EQ(unknown.subject(), "colors");
}

TEST(FilterParse, RoundTripOverSpaces) {
    auto s = space_from("w 1 0\nx 0 1\n");
    EXPECT_EQ(apply_filter(s, parse_filter("  rank\t<=1\n")).labels, std::vector<std::string>{"w"});
}

TEST(FilterRule, FactoryPreconditions) {
    EXPECT_THROW(FilterRule::all_of({}), Error);
    EXPECT_THROW(FilterRule::any_of({}), Error);
    EXPECT_THROW(FilterRule::meta("x", CompareOp::Lt, NAN), Error);
    EXPECT_THROW(FilterRule::similarity(parse_formula("a"), Measure::Cosine, CompareOp::Lt, INFINITY), Error);
    EXPECT_THROW(FilterRule::similarity(parse_formula("norm(a)"), Measure::Cosine, CompareOp::Lt, 0), Error);
}

// ---------------------------------------------------------------------------
// properties against the per-item oracle

class FilterProperties : public ::testing::Test {
protected:
    static void SetUpTestSuite() { fixture_ = new EmbeddingSpace(gen::filter_fixture()); }
    static void TearDownTestSuite() { delete fixture_; }
    static const EmbeddingSpace& space() { return *fixture_; }
    static EmbeddingSpace* fixture_;
};
EmbeddingSpace* FilterProperties::fixture_ = nullptr;

TEST_F(FilterProperties, MatchesOracle) {
    gen::Rng rng(301);
    for (int t = 0; t < 200; ++t) {
        auto rule = gen::random_rule(rng, space(), 4);
        ASSERT_EQ(apply_filter(space(), rule).labels, oracle::filter(space(), rule)) << "trial " << t;
    }
}

TEST_F(FilterProperties, AndIsIntersection) {
    gen::Rng rng(302);
    for (int t = 0; t < 200; ++t) {
        auto r1 = gen::random_rule(rng, space(), 3);
        auto r2 = gen::random_rule(rng, space(), 3);
        auto a = as_set(apply_filter(space(), r1).labels);
        auto b = as_set(apply_filter(space(), r2).labels);
        std::set<std::string> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
        ASSERT_EQ(as_set(apply_filter(space(), FilterRule::all_of({r1, r2})).labels), both) << "trial " << t;
    }
}

TEST_F(FilterProperties, DeMorganAndComplement) {
    gen::Rng rng(303);
    for (int t = 0; t < 200; ++t) {
        auto a = gen::random_rule(rng, space(), 3);
        auto b = gen::random_rule(rng, space(), 3);
        auto lhs = apply_filter(space(), FilterRule::negate(FilterRule::all_of({a, b}))).labels;
        auto rhs = apply_filter(space(), FilterRule::any_of({FilterRule::negate(a), FilterRule::negate(b)})).labels;
        ASSERT_EQ(lhs, rhs) << "trial " << t;

        auto in = as_set(apply_filter(space(), a).labels);
        auto out = apply_filter(space(), FilterRule::negate(a)).labels;
        ASSERT_EQ(in.size() + out.size(), space().size());
        for (const auto& l : out) ASSERT_FALSE(in.contains(l));
    }
}

TEST_F(FilterProperties, PureAndOrdered) {
    gen::Rng rng(304);
    for (int t = 0; t < 100; ++t) {
        auto rule = gen::random_rule(rng, space(), 4);
        auto first = apply_filter(space(), rule);
        auto second = apply_filter(space(), rule);
        ASSERT_EQ(first.labels, second.labels);
        ASSERT_EQ(first.warnings, second.warnings);
        std::size_t prev = 0;
        for (const auto& l : first.labels) {
            const std::size_t idx = *space().index_of(l);
            ASSERT_TRUE(&l == &first.labels.front() || idx > prev);
            prev = idx;
        }
    }
}
