#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace txtrace {

// AES-256-GCM with no AAD, as used by the OP_RETURN signaling payloads.
// Returns the plaintext on successful authenticated decryption, nullopt on
// authentication failure. key must be 32 bytes, iv 12 bytes, tag 16 bytes.
std::optional<std::vector<uint8_t>> aes_gcm_decrypt(
    const std::vector<uint8_t>& iv, const std::vector<uint8_t>& ciphertext,
    const std::vector<uint8_t>& tag, const std::vector<uint8_t>& key);

// Encryption counterpart, used by the synthetic chain generator and tests.
// Returns ciphertext and fills tag_out (16 bytes).
std::vector<uint8_t> aes_gcm_encrypt(const std::vector<uint8_t>& iv,
                                     const std::vector<uint8_t>& plaintext,
                                     const std::vector<uint8_t>& key,
                                     std::vector<uint8_t>& tag_out);

std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

}  // namespace txtrace
