// Copyright 2026 The qdac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include "qdac/errors.hpp"

namespace qdac {

/// The three registers: L holds data words, R holds pointers, A holds the
/// ancillas the converter writes its analog deviations into.
enum class Register { L, R, A };

/// Fixed global qubit order: the L block is most significant, then R, then A,
/// so a basis ket reads |data>|pointer>|ancilla>. Within each register, index
/// i counts from the least significant bit.
struct RegisterLayout {
    int n_l = 0;
    int n_r = 0;
    int n_a = 0;

    int total_qubits() const { return n_l + n_r + n_a; }
    std::uint64_t dim() const { return std::uint64_t{1} << total_qubits(); }

    /// Global bit position of qubit i of a register (position 0 = least
    /// significant bit of a basis index).
    int position(Register reg, int i) const {
        switch (reg) {
            case Register::A: check_index(i, n_a, "ancilla"); return i;
            case Register::R: check_index(i, n_r, "pointer"); return n_a + i;
            case Register::L: check_index(i, n_l, "data"); return n_a + n_r + i;
        }
        throw LayoutError("unknown register");
    }

    Register register_of(int position) const {
        if (position < 0 || position >= total_qubits()) throw LayoutError("qubit position out of range");
        if (position < n_a) return Register::A;
        if (position < n_a + n_r) return Register::R;
        return Register::L;
    }

    std::uint64_t l_part(std::uint64_t basis) const { return (basis >> (n_a + n_r)) & mask(n_l); }
    std::uint64_t r_part(std::uint64_t basis) const { return (basis >> n_a) & mask(n_r); }
    std::uint64_t a_part(std::uint64_t basis) const { return basis & mask(n_a); }

    std::uint64_t basis_index(std::uint64_t l, std::uint64_t r, std::uint64_t a) const {
        return (l << (n_r + n_a)) | (r << n_a) | a;
    }

    bool operator==(const RegisterLayout&) const = default;

   private:
    static std::uint64_t mask(int bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }
    static void check_index(int i, int count, const char* what) {
        if (i < 0 || i >= count)
            throw LayoutError(std::string(what) + " qubit index out of range");
    }
};

/// Layout of the converter output: n data qubits, m pointer qubits, n ancillas.
inline RegisterLayout dac_layout(int m, int n) { return RegisterLayout{n, m, n}; }

/// Layout before ancillas are attached.
inline RegisterLayout input_layout(int m, int n) { return RegisterLayout{n, m, 0}; }

}  // namespace qdac
