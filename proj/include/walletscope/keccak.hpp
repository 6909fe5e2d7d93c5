// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/bytes.hpp>

namespace walletscope
{
/// Keccak-256 with the original 0x01 domain padding (as used by Ethereum),
/// not the FIPS-202 SHA3-256 variant.
hash256 keccak256(bytes_view data) noexcept;

inline hash256 keccak256(std::string_view text) noexcept
{
    return keccak256(bytes_view{reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}
}  // namespace walletscope
