// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/evm.hpp>

namespace walletscope
{
/// Normalized bytecode used as a functional-equivalence key: PUSH arguments,
/// the metadata trailer and (for creation code) constructor arguments are
/// zeroed, then trailing zero bytes are dropped.
struct Skeleton
{
    walletscope::bytes bytes;
    hash256 hash;

    friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

Skeleton skeletonize(const Bytecode& code);

/// Keccak-256 of the skeleton bytes.
hash256 skeleton_hash(const Skeleton& s) noexcept;

}  // namespace walletscope
