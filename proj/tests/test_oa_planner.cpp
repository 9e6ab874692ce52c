#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "napsched/oa_planner.hpp"
#include "napsched/workload.hpp"
#include "support.hpp"

using namespace napsched;

namespace {

PendingJob pj(std::int64_t id, double deadline, double rem) {
    return PendingJob{id, deadline, rem};
}

/// Work the plan schedules inside [lo, hi): integral of speed_at over the
/// overlap of each segment with the window.
double planned_work_in(const OAPlan& p, double lo, double hi) {
    double total = 0.0;
    double prev = p.base_time();
    for (const auto& seg : p.segments()) {
        const double a = std::max(lo, prev);
        const double b = std::min(hi, seg.end_time);
        if (b > a) total += seg.density * (b - a);
        prev = seg.end_time;
    }
    return total;
}

std::vector<PendingJob> random_pending(SplitMix64& rng, int max_n) {
    const int n = static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_n + 1));
    std::vector<PendingJob> out;
    for (int i = 0; i < n; ++i) {
        const double deadline = rng.next_in(0.05, 4.0);
        const double rem = rng.next_in(0.0, 3.0);
        out.push_back(pj(i, deadline, rem));
    }
    return out;
}

}  // namespace

TEST_CASE("plan: worked examples") {
    {
        const std::vector<PendingJob> pending{pj(0, 2.0, 4.0)};
        const OAPlan p = plan(0.0, pending);
        REQUIRE_EQ(p.segments().size(), 1);
        CHECK_EQ(p.base_time(), 0.0);
        CHECK_EQ(p.segments()[0].end_time, 2.0);
        CHECK_EQ(p.segments()[0].density, 2.0);
        CHECK_EQ(p.initial_speed(), 2.0);
        CHECK_EQ(p.density_for(0), 2.0);
    }
    {
        const std::vector<PendingJob> pending{pj(0, 1.0, 3.0), pj(1, 2.0, 2.0)};
        const OAPlan p = plan(0.0, pending);
        REQUIRE_EQ(p.segments().size(), 2);
        CHECK_EQ(p.segments()[0].end_time, 1.0);
        CHECK_EQ(p.segments()[0].density, 3.0);
        CHECK_EQ(p.segments()[1].end_time, 2.0);
        CHECK_EQ(p.segments()[1].density, 2.0);
        CHECK_EQ(p.density_for(0), 3.0);
        CHECK_EQ(p.density_for(1), 2.0);
    }
    {
        const OAPlan p = plan(3.0, std::vector<PendingJob>{});
        CHECK(p.empty());
        CHECK_EQ(p.initial_speed(), 0.0);
        CHECK_EQ(p.speed_at(3.0), 0.0);
    }
}

TEST_CASE("plan: density ties collapse into the latest-deadline interval") {
    const std::vector<PendingJob> pending{pj(0, 1.0, 1.0), pj(1, 2.0, 1.0)};
    const OAPlan p = plan(0.0, pending);
    REQUIRE_EQ(p.segments().size(), 1);
    CHECK_EQ(p.segments()[0].end_time, 2.0);
    CHECK_EQ(p.segments()[0].density, 1.0);
    CHECK_EQ(p.density_for(0), 1.0);
    CHECK_EQ(p.density_for(1), 1.0);
}

TEST_CASE("speed_at: half-open segments, later segment at a boundary") {
    const std::vector<PendingJob> pending{pj(0, 1.0, 3.0), pj(1, 2.0, 2.0)};
    const OAPlan p = plan(0.0, pending);
    CHECK_EQ(p.speed_at(0.5), 3.0);
    CHECK_EQ(p.speed_at(1.0), 2.0);
    CHECK_EQ(p.speed_at(1.5), 2.0);
    CHECK_EQ(p.speed_at(2.0), 0.0);
    CHECK_EQ(p.speed_at(5.0), 0.0);
    CHECK_EQ(p.speed_at(-1.0), 3.0);
    CHECK_EQ(p.speed_at(0.0), 3.0);
}

TEST_CASE("plan and density_for reject bad input") {
    const std::vector<PendingJob> stale{pj(0, 1.0, 1.0)};
    CHECK_THROWS_AS(plan(1.0, stale), std::invalid_argument);
    CHECK_THROWS_AS(plan(1.5, stale), std::invalid_argument);
    const std::vector<PendingJob> negative{pj(0, 2.0, -0.5)};
    CHECK_THROWS_AS(plan(0.0, negative), std::invalid_argument);
    const OAPlan p = plan(0.0, std::vector<PendingJob>{pj(3, 2.0, 4.0)});
    CHECK_THROWS_AS(p.density_for(7), std::invalid_argument);
}

TEST_CASE("hypothetical_speed: worked examples, pending set untouched") {
    const std::vector<PendingJob> empty;
    CHECK_EQ(hypothetical_speed(0.0, empty, pj(0, 2.0, 2.0)), 1.0);

    const std::vector<PendingJob> one{pj(9, 1.0, 1.0)};
    CHECK_EQ(hypothetical_speed(0.0, one, pj(0, 1.0, 2.0)), 3.0);
    CHECK_EQ(one.size(), 1);
    CHECK_EQ(one[0].remaining_work, 1.0);

    const std::vector<PendingJob> busy{pj(0, 2.0, 2.0)};
    CHECK_EQ(hypothetical_speed(0.0, busy, pj(1, 10.0, 1.0)), 0.125);
}

TEST_CASE("plan conserves work and decreases strictly across segments") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const double t = rng.next_in(-1.0, 1.0);
        std::vector<PendingJob> pending = random_pending(rng, 6);
        for (PendingJob& j : pending) j.deadline += t;
        const OAPlan p = plan(t, pending);

        double total_rem = 0.0;
        for (const PendingJob& j : pending) total_rem += j.remaining_work;
        CHECK_EQ(planned_work_in(p, t, 1e18), doctest::Approx(total_rem).epsilon(1e-9));

        double prev_end = t;
        double prev_density = std::numeric_limits<double>::infinity();
        for (const auto& seg : p.segments()) {
            CHECK_GT(seg.end_time, prev_end);
            CHECK_LT(seg.density, prev_density);
            CHECK_GE(seg.density, 0.0);
            // Every segment boundary is a pending deadline.
            const bool is_deadline =
                std::any_of(pending.begin(), pending.end(), [&](const PendingJob& j) {
                    return j.deadline == seg.end_time;
                });
            CHECK(is_deadline);
            prev_end = seg.end_time;
            prev_density = seg.density;
        }
    }
}

TEST_CASE("plan matches the exhaustive reference planner") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::vector<PendingJob> pending = random_pending(rng, 6);
        const OAPlan p = plan(0.0, pending);
        const std::vector<testsupport::RefSegment> ref =
            testsupport::reference_plan(0.0, pending);
        REQUIRE_EQ(p.segments().size(), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            CHECK_EQ(p.segments()[i].end_time, doctest::Approx(ref[i].end).epsilon(1e-12));
            CHECK_EQ(p.segments()[i].density,
                     doctest::Approx(ref[i].density).epsilon(1e-9));
        }
    }
}

TEST_CASE("every segment crossing a job's window runs at least that job's density") {
    SplitMix64 rng(501);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::vector<PendingJob> pending = random_pending(rng, 6);
        const OAPlan p = plan(0.0, pending);
        for (const PendingJob& j : pending) {
            const double dj = p.density_for(j.id);
            double prev = 0.0;
            for (const auto& seg : p.segments()) {
                // Segment [prev, end) intersects [0, d_j) iff prev < d_j.
                if (prev < j.deadline) CHECK_GE(seg.density, dj - 1e-9);
                prev = seg.end_time;
                if (prev >= j.deadline) break;
            }
        }
    }
}

TEST_CASE("inserting a job perturbs planned work by at most that job's work") {
    SplitMix64 rng(909);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::vector<PendingJob> pending = random_pending(rng, 5);
        const PendingJob extra = pj(100, rng.next_in(0.05, 4.0), rng.next_in(0.0, 3.0));
        std::vector<PendingJob> grown = pending;
        grown.push_back(extra);

        const OAPlan before = plan(0.0, pending);
        const OAPlan after = plan(0.0, grown);

        // Over any union of sub-intervals the new plan does at least as much
        // work, and at most the old work plus the inserted job's work.
        for (int k = 0; k < 3; ++k) {
            double w_before = 0.0, w_after = 0.0;
            for (int piece = 0; piece < 3; ++piece) {
                double lo = rng.next_in(0.0, 4.0);
                double hi = rng.next_in(0.0, 4.0);
                if (hi < lo) std::swap(lo, hi);
                lo += piece * 4.0;  // disjoint by construction
                hi += piece * 4.0;
                w_before += planned_work_in(before, lo, hi);
                w_after += planned_work_in(after, lo, hi);
            }
            CHECK_LE(w_before, w_after + 1e-9);
            CHECK_LE(w_after, w_before + extra.remaining_work + 1e-9);
        }

        // No incumbent's planned density drops when a job is added.
        for (const PendingJob& j : pending) {
            CHECK_GE(after.density_for(j.id), before.density_for(j.id) - 1e-9);
        }
        CHECK_EQ(after.density_for(extra.id),
                 doctest::Approx(hypothetical_speed(0.0, pending, extra)).epsilon(1e-12));
    }
}
