// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/keccak.hpp>
#include <walletscope/skeleton.hpp>

#include <algorithm>

namespace walletscope
{
namespace
{
void zero_range(bytes& b, size_t start, size_t length) noexcept
{
    const auto end = std::min(b.size(), start + length);
    std::fill(b.begin() + static_cast<std::ptrdiff_t>(std::min(start, end)),
        b.begin() + static_cast<std::ptrdiff_t>(end), uint8_t{0});
}
}  // namespace

Skeleton skeletonize(const Bytecode& code)
{
    auto out = code.code;

    // Trailer positions are taken from the original bytes: zeroing push data
    // first could destroy the length suffix.
    if (code.source == CodeSource::creation)
    {
        const auto trailers = find_embedded_metadata(code.code);
        for (const auto& t : trailers)
            zero_range(out, t.start_offset, t.length);
        if (!trailers.empty())
        {
            // Everything after the last trailer is constructor arguments.
            const auto end = trailers.back().start_offset + trailers.back().length;
            zero_range(out, end, out.size() - end);
        }
    }
    else if (const auto trailer = locate_metadata(code.code))
    {
        zero_range(out, trailer->start_offset, trailer->length);
    }

    for (const auto& ins : disassemble(code.code))
    {
        if (ins.push_arg)
            zero_range(out, ins.offset + 1, ins.push_arg->size());
    }

    const auto last = std::find_if(out.rbegin(), out.rend(), [](uint8_t b) { return b != 0; });
    out.erase(last.base(), out.end());

    Skeleton s{std::move(out), {}};
    s.hash = skeleton_hash(s);
    return s;
}

hash256 skeleton_hash(const Skeleton& s) noexcept
{
    return keccak256(s.bytes);
}

}  // namespace walletscope
