#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beamtrack/errors.hpp"

namespace beamtrack {

// Bijection between flat state indices and per-path column tuples
// (i_1, ..., i_L), i_l in {0..N_t-1}. Path 0 is the least significant digit
// of the mixed-radix index, so index = sum_l i_l * N_t^l.
struct StateEnumeration {
    int n_tx = 0;
    int n_paths = 0;
    long n_states = 0;

    StateEnumeration() = default;
    StateEnumeration(int n_tx_, int n_paths_) : n_tx(n_tx_), n_paths(n_paths_) {
        if (n_tx < 1 || n_paths < 1) throw config_error("state enumeration needs n_tx, L >= 1");
        long n = 1;
        for (int l = 0; l < n_paths; ++l) {
            n *= n_tx;
            if (n > (1L << 20))
                throw config_error(
                    "full state enumeration capped at 2^20 states; use the reduced statistic");
        }
        n_states = n;
    }

    int column_of(long index, int path) const {
        for (int l = 0; l < path; ++l) index /= n_tx;
        return static_cast<int>(index % n_tx);
    }

    void decode(long index, std::span<int> columns) const {
        for (int l = 0; l < n_paths; ++l) {
            columns[l] = static_cast<int>(index % n_tx);
            index /= n_tx;
        }
    }

    long encode(std::span<const int> columns) const {
        long index = 0;
        for (int l = n_paths - 1; l >= 0; --l) index = index * n_tx + columns[l];
        return index;
    }
};

// Dense (state, column) -> number of paths in that column. This is the bin
// count the enumerated POMDP model uses; rows are not part of the enumerated
// state, so co-located paths count once per path (distinct AoA assumed).
class BinCountTable {
  public:
    explicit BinCountTable(const StateEnumeration& venum) : n_tx_(venum.n_tx) {
        counts_.assign(static_cast<std::size_t>(venum.n_states) * n_tx_, 0);
        std::vector<int> cols(venum.n_paths);
        for (long s = 0; s < venum.n_states; ++s) {
            venum.decode(s, cols);
            for (int c : cols) ++counts_[static_cast<std::size_t>(s) * n_tx_ + c];
        }
    }

    int count(long state, int column) const {
        return counts_[static_cast<std::size_t>(state) * n_tx_ + column];
    }

  private:
    int n_tx_;
    std::vector<std::uint8_t> counts_;
};

}  // namespace beamtrack
