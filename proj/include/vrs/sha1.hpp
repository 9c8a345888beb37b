#pragma once

#include <string>
#include <string_view>

namespace vrs {

// SHA-1 digest of a byte string, lowercase hex.
std::string sha1_hex(std::string_view data);

// Hash of the content framed the way git hashes blobs
// ("blob <size>\0<content>"), so artifacts can be checked with
// `git hash-object <file>`.
std::string git_blob_hash(std::string_view content);

} // namespace vrs
