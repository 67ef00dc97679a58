#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace noma::channel {

// One layer of the frame: every user in layer b transmits `copies` copies,
// and after SIC of the layers below, `interferers` = B - b co-channel
// signals remain per block.
struct LayerSpec {
    int index = 0;  // b, 1-based
    int copies = 0;
    int users = 0;
    int interferers = 0;
};

// Layered repetition frame: L parallel blocks, each block carrying exactly
// one signal per layer. Users within a layer occupy disjoint block stripes.
struct FrameLayout {
    struct User {
        int layer = 0;  // 1-based layer index
        std::vector<int> blocks;
    };

    int blocks = 0;  // L
    std::vector<LayerSpec> layers;
    std::vector<User> users;  // global user index, layer-major

    int num_layers() const { return static_cast<int>(layers.size()); }
    int total_users() const { return static_cast<int>(users.size()); }

    // Index sets U_l: the users transmitting through each block.
    std::vector<std::vector<int>> users_per_block() const;

    void validate() const;  // throws InvalidLayoutError

    std::string to_json() const;
    static FrameLayout from_json(const std::string& text);
};

// Dyadic layout: layer b has L / 2^(b-1) copies per user and 2^(b-1) users.
FrameLayout build_layout(int blocks, int num_layers);

// Arbitrary (copies, users) ladder; all products must equal a common L and
// copies must be nonincreasing in the layer index.
FrameLayout build_layout_custom(std::span<const std::pair<int, int>> specs);

// One Rayleigh block-fading realization. Normalization: P = sigma_h^2 = 1,
// N0 = 1/snr; only the ratio enters the SINR, so physical units rescale.
struct ChannelDraw {
    int blocks = 0;
    int users = 0;
    std::vector<std::complex<double>> gains;  // dense blocks x users, 0 where inactive
    double channel_variance = 1.0;
    double signal_power = 1.0;
    double noise_power = 0.0;

    std::complex<double> gain(int block, int user) const { return gains[static_cast<std::size_t>(block) * users + user]; }
};

ChannelDraw draw_channel(const FrameLayout& layout, double snr, std::uint64_t seed,
                         std::uint64_t trial);

// Gray-mapped unit-energy QPSK; bit pair (b0, b1) selects the quadrant.
std::vector<std::complex<double>> qpsk_modulate(std::span<const int> bits);

struct Interleaver {
    std::vector<int> perm;  // position i of the interleaved block takes symbol perm[i]

    template <class T>
    std::vector<T> apply(std::span<const T> block) const {
        std::vector<T> out(block.size());
        for (std::size_t i = 0; i < perm.size(); ++i) out[i] = block[perm[i]];
        return out;
    }
    template <class T>
    std::vector<T> invert(std::span<const T> block) const {
        std::vector<T> out(block.size());
        for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = block[i];
        return out;
    }
};

// Uniformly random permutation, deterministic in (seed, copy, user).
Interleaver make_interleaver(int length, std::uint64_t seed, int copy, int user);

}  // namespace noma::channel
