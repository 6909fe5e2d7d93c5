// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace walletscope
{
/// Applies `fn` to every input on up to `jobs` threads. Results keep input
/// order. The first exception (by input position) is rethrown after all
/// workers finish.
template <typename Range, typename Fn>
auto parallel_map(const Range& inputs, size_t jobs, Fn fn)
{
    using R = decltype(fn(inputs[0]));
    std::vector<R> out(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    std::atomic<size_t> next{0};

    const auto worker = [&] {
        for (size_t i = next++; i < inputs.size(); i = next++)
        {
            try
            {
                out[i] = fn(inputs[i]);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };

    jobs = std::clamp<size_t>(jobs, 1, std::max<size_t>(inputs.size(), 1));
    if (jobs == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

}  // namespace walletscope
