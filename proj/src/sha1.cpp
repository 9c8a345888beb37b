#include "vrs/sha1.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>

namespace vrs {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int s) {
    return (x << s) | (x >> (32 - s));
}

struct Sha1 {
    std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                   0xC3D2E1F0u};
    std::array<unsigned char, 64> block{};
    std::size_t block_len = 0;
    std::uint64_t total_bits = 0;

    void process_block() {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(block[4 * i]) << 24) |
                   (std::uint32_t(block[4 * i + 1]) << 16) |
                   (std::uint32_t(block[4 * i + 2]) << 8) |
                   std::uint32_t(block[4 * i + 3]);
        for (int i = 16; i < 80; ++i)
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    void update(const unsigned char* data, std::size_t len) {
        total_bits += std::uint64_t(len) * 8;
        while (len > 0) {
            const std::size_t take = std::min(len, block.size() - block_len);
            std::memcpy(block.data() + block_len, data, take);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == block.size()) {
                process_block();
                block_len = 0;
            }
        }
    }

    std::string finish() {
        const unsigned char one = 0x80;
        const std::uint64_t bits = total_bits;
        update(&one, 1);
        const unsigned char zero = 0x00;
        while (block_len != 56)
            update(&zero, 1);
        unsigned char length_bytes[8];
        for (int i = 0; i < 8; ++i)
            length_bytes[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(length_bytes, 8);

        static const char* hex = "0123456789abcdef";
        std::string out;
        out.reserve(40);
        for (std::uint32_t word : h)
            for (int shift = 28; shift >= 0; shift -= 4)
                out.push_back(hex[(word >> shift) & 0xF]);
        return out;
    }
};

} // namespace

std::string sha1_hex(std::string_view data) {
    Sha1 hasher;
    hasher.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return hasher.finish();
}

std::string git_blob_hash(std::string_view content) {
    std::string framed = "blob " + std::to_string(content.size());
    framed.push_back('\0');
    framed.append(content);
    return sha1_hex(framed);
}

} // namespace vrs
