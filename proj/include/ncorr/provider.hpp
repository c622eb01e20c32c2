// provider.hpp: the correlation-provider contract consumed by the witness layer.
//
// A provider exposes k points and returns the normally-and-time-ordered
// correlation function for any MultiIndex over those points. Two models ship
// with the library: StateProvider (moments.hpp) and AtomProvider
// (atom_source.hpp). AnyProvider erases the concrete type for the CLI.

#pragma once

#include <complex>
#include <concepts>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>

#include "ncorr/multi_index.hpp"

namespace ncorr {

template <class P>
concept CorrelationProvider = requires(const P& p, const MultiIndex& idx) {
    { p.points() } -> std::convertible_to<std::size_t>;
    { p.evaluate(idx) } -> std::convertible_to<std::complex<double>>;
};

// Providers may report that two labels sit at the same retarded time.
template <class P>
bool points_coincide(const P& p, std::size_t a, std::size_t b) {
    if constexpr (requires { { p.coincident(a, b) } -> std::convertible_to<bool>; }) {
        return p.coincident(a, b);
    } else {
        return false;
    }
}

template <class P>
std::string provider_kind(const P& p) {
    if constexpr (requires { { p.kind() } -> std::convertible_to<std::string>; }) {
        return p.kind();
    } else {
        return "custom";
    }
}

class AnyProvider {
public:
    template <CorrelationProvider P>
        requires(!std::same_as<std::remove_cvref_t<P>, AnyProvider>)
    AnyProvider(P provider) : impl_(std::make_shared<Model<P>>(std::move(provider))) {}

    std::size_t points() const { return impl_->points(); }
    std::complex<double> evaluate(const MultiIndex& idx) const { return impl_->evaluate(idx); }
    bool coincident(std::size_t a, std::size_t b) const { return impl_->coincident(a, b); }
    std::string kind() const { return impl_->kind(); }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual std::size_t points() const = 0;
        virtual std::complex<double> evaluate(const MultiIndex&) const = 0;
        virtual bool coincident(std::size_t, std::size_t) const = 0;
        virtual std::string kind() const = 0;
    };

    template <class P>
    struct Model final : Concept {
        explicit Model(P p) : provider(std::move(p)) {}
        std::size_t points() const override { return provider.points(); }
        std::complex<double> evaluate(const MultiIndex& idx) const override { return provider.evaluate(idx); }
        bool coincident(std::size_t a, std::size_t b) const override { return points_coincide(provider, a, b); }
        std::string kind() const override { return provider_kind(provider); }
        P provider;
    };

    std::shared_ptr<const Concept> impl_;
};

}  // namespace ncorr
