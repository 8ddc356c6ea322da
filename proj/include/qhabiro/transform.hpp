#pragma once

#include "qhabiro/qcomb.hpp"

#include <map>
#include <memory>
#include <shared_mutex>

namespace qh {

enum class Side { F, P };

// Lazily generated coefficient family. On side F index k is f_k, on side P it
// is a_{-k-1}; sigma0 holds the coefficient of the constant sigma_0 = 1.
class CoeffSeq {
public:
    using Gen = std::function<QSeries(long long k, OptRat prec)>;

    CoeffSeq() = default;
    CoeffSeq(Side side, Gen gen, std::optional<long long> max_index = std::nullopt);

    Side side() const { return side_; }
    std::optional<long long> max_index() const { return max_index_; }

    // coefficient at index k, valid at least below prec (exact when prec is empty)
    QSeries at(long long k, OptRat prec = std::nullopt) const;

    QSeries sigma0() const { return sigma0_; }
    CoeffSeq& set_sigma0(QSeries s) {
        sigma0_ = std::move(s);
        return *this;
    }

    // certified lower bound on the degree of the k-th coefficient, for all k
    std::optional<Rat> floor(long long k) const;
    CoeffSeq& set_floor(std::function<Rat(long long)> f) {
        floor_ = std::move(f);
        return *this;
    }
    // constant C of the lower bound condition if known to hold for every index
    std::optional<long long> lbc_constant() const { return lbc_c_; }
    CoeffSeq& set_lbc_constant(std::optional<long long> c);

    bool valid() const { return static_cast<bool>(gen_); }

private:
    struct Memo {
        std::shared_mutex mu;
        std::map<long long, QSeries> cache;
    };
    Side side_ = Side::P;
    Gen gen_;
    std::optional<long long> max_index_;
    QSeries sigma0_;
    std::function<Rat(long long)> floor_;
    std::optional<long long> lbc_c_;
    std::shared_ptr<Memo> memo_;
};

// -(k+1)(k-2)/2, the lower-bound-condition profile of a_{-k-1}
Rat lbc_profile(long long k);

// degree floor implied by the lower bound condition with constant c
std::function<Rat(long long)> lbc_floor(long long c);

CoeffSeq sequence_from_list(Side side, std::vector<QSeries> coeffs);

// entries [2k+j choose j] for j = 0..j_max: the x^{k+j} coefficients of the
// normalized sigma with index -k-1
std::vector<QSeries> sigma_tilde_x_expansion(long long k, long long j_max);

CoeffSeq f_from_a(const CoeffSeq& a, std::optional<long long> max_index = std::nullopt);
CoeffSeq a_from_f(const CoeffSeq& f, std::optional<long long> max_index = std::nullopt);

// coefficient of f_i in a_{-k-1}: (-1)^{k+i} [2k choose k-i][2i+1]/[k+i+1]
QSeries inverse_transform_coeff(long long k, long long i);

struct LbcReport {
    long long checked_range = 0;
    std::optional<Rat> best_constant;
    std::vector<long long> indeterminate;  // coefficients zero up to their precision
    bool warning() const { return !indeterminate.empty(); }
};

LbcReport lbc_check(const CoeffSeq& a, long long k_max, OptRat prec = std::nullopt);

// lower bound on deg f_i implied by the lower bound condition with constant c
Rat fk_degree_floor(long long i, long long c);
bool fk_degree_check(const CoeffSeq& f, long long c, long long k_max, OptRat prec = std::nullopt);

}  // namespace qh
