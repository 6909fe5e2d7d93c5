// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/keccak.hpp>

#include <bit>

namespace walletscope
{
namespace
{
constexpr uint64_t round_constants[24] = {
    0x0000000000000001, 0x0000000000008082, 0x800000000000808a, 0x8000000080008000,
    0x000000000000808b, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008a, 0x0000000000000088, 0x0000000080008009, 0x000000008000000a,
    0x000000008000808b, 0x800000000000008b, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800a, 0x800000008000000a,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
};

// Rotation offsets and lane permutation for the combined rho+pi step.
constexpr int rho[24] = {1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62,
    18, 39, 61, 20, 44};
constexpr int pi[24] = {10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14,
    22, 9, 6, 1};

void keccak_f1600(uint64_t (&st)[25]) noexcept
{
    for (const auto rc : round_constants)
    {
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const auto d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                st[y + x] ^= d;
        }

        auto carried = st[1];
        for (int i = 0; i < 24; ++i)
        {
            const auto j = pi[i];
            const auto tmp = st[j];
            st[j] = std::rotl(carried, rho[i]);
            carried = tmp;
        }

        for (int y = 0; y < 25; y += 5)
        {
            uint64_t row[5];
            for (int x = 0; x < 5; ++x)
                row[x] = st[y + x];
            for (int x = 0; x < 5; ++x)
                st[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }

        st[0] ^= rc;
    }
}

uint64_t load_le64(const uint8_t* p) noexcept
{
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = v << 8 | p[i];
    return v;
}
}  // namespace

hash256 keccak256(bytes_view data) noexcept
{
    constexpr size_t rate = 136;
    uint64_t st[25]{};

    auto p = data.data();
    auto n = data.size();
    for (; n >= rate; n -= rate, p += rate)
    {
        for (size_t i = 0; i < rate / 8; ++i)
            st[i] ^= load_le64(p + 8 * i);
        keccak_f1600(st);
    }

    uint8_t block[rate]{};
    std::copy(p, p + n, block);
    block[n] ^= 0x01;
    block[rate - 1] ^= 0x80;
    for (size_t i = 0; i < rate / 8; ++i)
        st[i] ^= load_le64(block + 8 * i);
    keccak_f1600(st);

    hash256 out;
    for (size_t i = 0; i < 32; ++i)
        out.bytes[i] = static_cast<uint8_t>(st[i / 8] >> (8 * (i % 8)));
    return out;
}

}  // namespace walletscope
