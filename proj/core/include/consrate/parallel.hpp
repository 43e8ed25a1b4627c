#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace consrate {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Splits [0, count) into contiguous blocks, one per worker. `make_acc()` builds a
/// per-worker accumulator, `body(acc, index)` runs one item, and the accumulators
/// are returned in worker order so the caller can reduce deterministically.
template <typename MakeAcc, typename Body>
auto parallel_accumulate(std::size_t count, unsigned threads, MakeAcc make_acc, Body body) {
    using Acc = decltype(make_acc());
    const unsigned workers = static_cast<unsigned>(
        std::max<std::size_t>(1, std::min<std::size_t>(resolve_threads(threads), count)));
    std::vector<Acc> accs;
    accs.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) accs.push_back(make_acc());

    auto run_block = [&](unsigned w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        for (std::size_t i = begin; i < end; ++i) body(accs[w], i);
    };

    if (workers == 1) {
        run_block(0);
        return accs;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                run_block(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return accs;
}

}  // namespace consrate
