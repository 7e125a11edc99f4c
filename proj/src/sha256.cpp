#include "evalforge/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace evalforge {

std::array<std::uint8_t, 32> sha256(std::string_view data) {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                   nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256: digest failed");
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    const auto digest = sha256(data);
    std::string s;
    s.reserve(64);
    for (std::uint8_t b : digest) {
        s.push_back(hex[b >> 4]);
        s.push_back(hex[b & 0xf]);
    }
    return s;
}

}  // namespace evalforge
