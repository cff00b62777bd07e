#ifndef SOSTREE_VERSION_HPP
#define SOSTREE_VERSION_HPP

namespace sostree {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the layout of any report file changes.
inline constexpr int kSchemaVersion = 1;

} // namespace sostree

#endif
