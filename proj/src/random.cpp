#include "bayesmv/random.hpp"

namespace bayesmv {

PathStream::PathStream(std::uint64_t seed, std::uint64_t path_index)
    : engine_(mix64(seed ^ mix64(path_index + 0x632be59bd9b4e019ULL))) {}

}  // namespace bayesmv
