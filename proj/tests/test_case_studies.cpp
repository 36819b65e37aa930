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

#include "support/case_studies.hpp"

namespace {

const vecaxis::EmbeddingSpace* wikipedia() {
    static const auto space = [] {
        auto path = case_study::wikipedia_vectors();
        return path ? std::optional(case_study::load_wikipedia(*path)) : std::nullopt;
    }();
    return space ? &*space : nullptr;
}

}  // namespace

#define REQUIRE_GLOVE()                                                                          \
    if (!wikipedia()) GTEST_SKIP() << "GloVe 50-d vectors not found; run tools/fetch_glove.sh or " \
                                      "set VECAXIS_GLOVE_WIKI"

TEST(CaseStudy, NurseLeansFemale) {
    REQUIRE_GLOVE();
    EXPECT_TRUE(case_study::nurse_leans_female(*wikipedia()));
}

TEST(CaseStudy, QueenIsBestAnalogyCandidate) {
    REQUIRE_GLOVE();
    EXPECT_TRUE(case_study::queen_is_best_analogy(*wikipedia()));
}

TEST(CaseStudy, YoutubeLeansGoogle) {
    REQUIRE_GLOVE();
    EXPECT_TRUE(case_study::youtube_leans_google(*wikipedia()));
}
