#include "core/channel.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace noma::channel {

std::vector<std::vector<int>> FrameLayout::users_per_block() const {
    std::vector<std::vector<int>> per_block(blocks);
    for (int k = 0; k < total_users(); ++k)
        for (int l : users[k].blocks) per_block[l].push_back(k);
    return per_block;
}

void FrameLayout::validate() const {
    if (blocks <= 0) throw InvalidLayoutError("layout: L must be positive");
    if (layers.empty()) throw InvalidLayoutError("layout: at least one layer required");
    const int B = num_layers();
    int expected_users = 0;
    for (int b = 0; b < B; ++b) {
        const LayerSpec& s = layers[b];
        if (s.index != b + 1) throw InvalidLayoutError("layout: layer indices must be 1..B in order");
        if (s.copies <= 0 || s.users <= 0) throw InvalidLayoutError("layout: D and K must be positive");
        if (s.copies * s.users != blocks)
            throw InvalidLayoutError("layout: D*K must equal L in every layer");
        if (b > 0 && s.copies > layers[b - 1].copies)
            throw InvalidLayoutError("layout: copies must be nonincreasing across layers");
        if (s.interferers != B - s.index)
            throw InvalidLayoutError("layout: interferer count must be B - b");
        expected_users += s.users;
    }
    if (total_users() != expected_users)
        throw InvalidLayoutError("layout: user list inconsistent with layer specs");

    // Within a layer the users' block sets must partition {0..L-1}; jointly
    // that makes every block carry exactly one user per layer.
    int k = 0;
    for (const LayerSpec& s : layers) {
        std::set<int> seen;
        for (int j = 0; j < s.users; ++j, ++k) {
            const User& u = users[k];
            if (u.layer != s.index) throw InvalidLayoutError("layout: user assigned to wrong layer");
            if (static_cast<int>(u.blocks.size()) != s.copies)
                throw InvalidLayoutError("layout: user block set size must equal D");
            for (int l : u.blocks) {
                if (l < 0 || l >= blocks) throw InvalidLayoutError("layout: block index out of range");
                if (!seen.insert(l).second)
                    throw InvalidLayoutError("layout: blocks reused within a layer");
            }
        }
        if (static_cast<int>(seen.size()) != blocks)
            throw InvalidLayoutError("layout: layer does not cover all blocks");
    }
}

namespace {

FrameLayout assemble(int blocks, std::span<const std::pair<int, int>> dk) {
    FrameLayout layout;
    layout.blocks = blocks;
    const int B = static_cast<int>(dk.size());
    for (int b = 0; b < B; ++b) {
        layout.layers.push_back({b + 1, dk[b].first, dk[b].second, B - (b + 1)});
        // Contiguous striping: user j of the layer gets blocks [j*D, (j+1)*D).
        for (int j = 0; j < dk[b].second; ++j) {
            FrameLayout::User u;
            u.layer = b + 1;
            for (int l = 0; l < dk[b].first; ++l) u.blocks.push_back(j * dk[b].first + l);
            layout.users.push_back(std::move(u));
        }
    }
    layout.validate();
    return layout;
}

}  // namespace

FrameLayout build_layout(int blocks, int num_layers) {
    if (blocks <= 0 || num_layers <= 0) throw InvalidLayoutError("build_layout: L and B must be positive");
    const int denom = 1 << (num_layers - 1);
    if (blocks % denom != 0)
        throw InvalidLayoutError("build_layout: L must be divisible by 2^(B-1)");
    std::vector<std::pair<int, int>> dk;
    for (int b = 1; b <= num_layers; ++b) {
        const int users = 1 << (b - 1);
        dk.emplace_back(blocks / users, users);
    }
    return assemble(blocks, dk);
}

FrameLayout build_layout_custom(std::span<const std::pair<int, int>> specs) {
    if (specs.empty()) throw InvalidLayoutError("build_layout_custom: no layers given");
    const int blocks = specs[0].first * specs[0].second;
    for (std::size_t b = 0; b < specs.size(); ++b) {
        const auto [D, K] = specs[b];
        if (D <= 0 || K <= 0) throw InvalidLayoutError("build_layout_custom: D and K must be positive");
        if (D * K != blocks)
            throw InvalidLayoutError("build_layout_custom: inconsistent D*K products");
        if (b > 0 && D > specs[b - 1].first)
            throw InvalidLayoutError("build_layout_custom: copies must be nonincreasing");
    }
    return assemble(blocks, specs);
}

ChannelDraw draw_channel(const FrameLayout& layout, double snr, std::uint64_t seed,
                         std::uint64_t trial) {
    if (!(snr > 0.0)) throw DomainError("draw_channel: snr must be > 0 (linear)");
    ChannelDraw draw;
    draw.blocks = layout.blocks;
    draw.users = layout.total_users();
    draw.gains.assign(static_cast<std::size_t>(draw.blocks) * draw.users, {0.0, 0.0});
    draw.noise_power = 1.0 / snr;
    for (int k = 0; k < draw.users; ++k) {
        for (int l : layout.users[k].blocks) {
            rng::Stream s(seed, trial, static_cast<std::uint64_t>(l),
                          static_cast<std::uint64_t>(k));
            // |h|^2 = -ln(u1) is Exp(1) exactly under this construction.
            const double r = std::sqrt(-std::log(s.next_uniform()));
            const double a = 2.0 * std::numbers::pi * s.next_uniform();
            draw.gains[static_cast<std::size_t>(l) * draw.users + k] = {r * std::cos(a),
                                                                        r * std::sin(a)};
        }
    }
    return draw;
}

std::vector<std::complex<double>> qpsk_modulate(std::span<const int> bits) {
    if (bits.size() % 2 != 0) throw DomainError("qpsk_modulate: bit count must be even");
    std::vector<std::complex<double>> symbols(bits.size() / 2);
    const double s = std::numbers::sqrt2 / 2.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        symbols[i] = {bits[2 * i] ? -s : s, bits[2 * i + 1] ? -s : s};
    }
    return symbols;
}

Interleaver make_interleaver(int length, std::uint64_t seed, int copy, int user) {
    if (length < 1) throw DomainError("make_interleaver: length must be >= 1");
    Interleaver pi;
    pi.perm.resize(length);
    for (int i = 0; i < length; ++i) pi.perm[i] = i;
    rng::Stream s(seed, 0xA11CEULL, static_cast<std::uint64_t>(copy),
                  static_cast<std::uint64_t>(user));
    for (int i = length - 1; i > 0; --i) {
        const int j = static_cast<int>(s.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(pi.perm[i], pi.perm[j]);
    }
    return pi;
}

std::string FrameLayout::to_json() const {
    nlohmann::json j;
    j["L"] = blocks;
    j["layers"] = nlohmann::json::array();
    for (const LayerSpec& s : layers) j["layers"].push_back({{"D", s.copies}, {"K", s.users}});
    return j.dump();
}

FrameLayout FrameLayout::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::pair<int, int>> dk;
    for (const auto& layer : j.at("layers"))
        dk.emplace_back(layer.at("D").get<int>(), layer.at("K").get<int>());
    FrameLayout layout = build_layout_custom(dk);
    if (j.contains("L") && j.at("L").get<int>() != layout.blocks)
        throw InvalidLayoutError("layout json: L does not match layer products");
    return layout;
}

}  // namespace noma::channel
