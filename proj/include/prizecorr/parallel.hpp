#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace prizecorr {

/// Runs body(begin, end, chunk_index) over disjoint chunks of [0, n).
/// Each chunk gets its own accumulator slot, so results can be merged in
/// chunk order and the outcome is independent of scheduling.
template <class Body>
void parallel_chunks(std::size_t n, int threads, const Body& body) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t want = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
    if (want > n) want = n ? n : 1;
    if (want <= 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(want);
    const std::size_t per = n / want;
    const std::size_t extra = n % want;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < want; ++c) {
        const std::size_t len = per + (c < extra ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&body, begin, end, c] { body(begin, end, c); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace prizecorr
