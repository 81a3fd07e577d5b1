#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "roadsight/morphology.hpp"

using namespace roadsight;

namespace {

BitMask random_mask(int w, int h, double density, std::mt19937_64& rng) {
    BitMask m(w, h);
    for (auto& b : m.bits) b = (rng() % 1000) < density * 1000 ? 1 : 0;
    return m;
}

bool subset_of(const BitMask& a, const BitMask& b) {
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        if (a.bits[i] && !b.bits[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("erode of a full 5x5 mask keeps the interior 3x3") {
    BitMask m(5, 5, true);
    const BitMask e = erode(m, StructElem(1, SEShape::SQUARE));
    CHECK(e.count() == 9);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x)
            CHECK(e.get(x, y) == (x >= 1 && x <= 3 && y >= 1 && y <= 3));
}

TEST_CASE("dilate of a single bit paints the element footprint") {
    BitMask m(5, 5);
    m.set(2, 2);
    const BitMask sq = dilate(m, StructElem(1, SEShape::SQUARE));
    CHECK(sq.count() == 9);
    const BitMask cr = dilate(m, StructElem(1, SEShape::CROSS));
    CHECK(cr.count() == 5);
    CHECK(cr.get(2, 2));
    CHECK(cr.get(1, 2));
    CHECK(cr.get(3, 2));
    CHECK(cr.get(2, 1));
    CHECK(cr.get(2, 3));
    CHECK_FALSE(cr.get(1, 1));
}

TEST_CASE("structuring element radius must be positive") {
    CHECK_THROWS_AS(StructElem(0), InvalidInput);
}

TEST_CASE("erode/dilate duality on random masks") {
    // dilate(m) == complement(erode(complement-with-set-border(m))); the set
    // border is emulated by padding the complement with r set pixels
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const int w = 6 + static_cast<int>(rng() % 10), h = 6 + static_cast<int>(rng() % 10);
        const int r = 1 + static_cast<int>(rng() % 2);
        const SEShape shape = (rng() % 2) ? SEShape::SQUARE : SEShape::CROSS;
        const StructElem se(r, shape);
        const BitMask m = random_mask(w, h, 0.4, rng);

        BitMask padded(w + 2 * r, h + 2 * r, true);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) padded.set(x + r, y + r, !m.get(x, y));
        const BitMask eroded = erode(padded, se);

        const BitMask d = dilate(m, se);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) CHECK(d.get(x, y) == !eroded.get(x + r, y + r));
    }
}

TEST_CASE("open and close are idempotent; erode <= id <= dilate") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 12), h = 8 + static_cast<int>(rng() % 12);
        const StructElem se(1 + static_cast<int>(rng() % 2),
                            (rng() % 2) ? SEShape::SQUARE : SEShape::CROSS);
        const BitMask m = random_mask(w, h, 0.5, rng);

        const BitMask o = open(m, se);
        CHECK(open(o, se) == o);
        const BitMask c = close(m, se);
        CHECK(close(c, se) == c);

        CHECK(subset_of(erode(m, se), m));
        CHECK(subset_of(m, dilate(m, se)));
        // opening is anti-extensive; closing is not extensive here because
        // out-of-bounds counts as unset, so border pixels can erode away
        CHECK(subset_of(o, m));
    }
}

TEST_CASE("opening removes an isolated speckle") {
    BitMask m(7, 7);
    m.set(3, 3);
    CHECK(open(m, StructElem(1)).count() == 0);
}
