#include "txtrace/features.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "txtrace/errors.hpp"

namespace txtrace {

namespace {
constexpr double kSecondsPerDay = 86400.0;
constexpr double kSecondsPerYear = 365.25 * 86400.0;

int64_t utc_day(int64_t ts) {
    // Negative timestamps (pre-1970) floor toward earlier days.
    return ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
}
}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "type",          "equiv_addrs",   "lifetime",      "timespan_d",
        "timespan_w",    "activity",      "activity_d",    "activity_w",
        "idle_time",     "daily_d_rate",  "daily_w_rate",  "yearly_d_txes",
        "yearly_w_txes", "balance",       "deposited",     "withdrawn",
        "txes",          "txes_out",      "txes_in",       "addr_as_change",
        "outputs",       "inputs",        "utxos",         "tx_size_mean",
        "tx_weight_mean", "tx_fee_mean",  "ins_age_mean",  "coinbase",
        "coinjoin",      "coinjoin_out",  "coinjoin_in",   "tx_ratio",
        "outs_per_tx",   "ins_per_tx",    "outs_per_out",  "ins_per_out",
        "outs_per_in",   "ins_per_in",    "profit_rate",   "expense_rate",
        "d_per_tx",      "w_per_tx",
    };
    return names;
}

int feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

FeatureVector extract_features(const ChainStore& store, const ClusterMap& clusters,
                               const std::string& address) {
    (void)clusters;  // reserved: all Table-4 features are address-level
    FeatureVector f{};
    const AddressRecord rec = store.context(address);
    f[0] = static_cast<double>(static_cast<int>(rec.type));
    f[1] = rec.equiv_count;
    if (rec.deposit_txs.empty() && rec.withdrawal_txs.empty()) return f;

    // Distinct transactions touching the address, chronological.
    std::vector<uint32_t> all;
    std::set_union(rec.deposit_txs.begin(), rec.deposit_txs.end(), rec.withdrawal_txs.begin(),
                   rec.withdrawal_txs.end(), std::back_inserter(all));

    auto ts_of = [&](uint32_t idx) { return store.tx(idx).timestamp; };
    const int64_t first_ts = ts_of(all.front());
    const int64_t last_ts = ts_of(all.back());
    const double lifetime = static_cast<double>(last_ts - first_ts);
    const double rate_denom = std::max(lifetime, 1.0);
    const double lifetime_days =
        static_cast<double>(utc_day(last_ts) - utc_day(first_ts) + 1);

    std::set<int64_t> days_all, days_d, days_w;
    for (uint32_t idx : all) days_all.insert(utc_day(ts_of(idx)));
    for (uint32_t idx : rec.deposit_txs) days_d.insert(utc_day(ts_of(idx)));
    for (uint32_t idx : rec.withdrawal_txs) days_w.insert(utc_day(ts_of(idx)));

    f[2] = lifetime;
    if (!rec.deposit_txs.empty())
        f[3] = static_cast<double>(ts_of(rec.deposit_txs.back()) - ts_of(rec.deposit_txs.front()));
    if (!rec.withdrawal_txs.empty())
        f[4] = static_cast<double>(ts_of(rec.withdrawal_txs.back()) -
                                   ts_of(rec.withdrawal_txs.front()));
    f[5] = static_cast<double>(days_all.size());
    f[6] = static_cast<double>(days_d.size());
    f[7] = static_cast<double>(days_w.size());
    f[8] = lifetime_days - f[5];
    f[9] = rec.deposit_txs.size() * kSecondsPerDay / rate_denom;
    f[10] = rec.withdrawal_txs.size() * kSecondsPerDay / rate_denom;
    f[11] = rec.deposit_txs.size() * kSecondsPerYear / rate_denom;
    f[12] = rec.withdrawal_txs.size() * kSecondsPerYear / rate_denom;

    double deposited = 0, withdrawn = 0;
    std::size_t out_slots = 0, in_slots = 0;
    for (uint32_t idx : rec.deposit_txs)
        for (const auto& s : store.tx(idx).outputs)
            if (!s.is_data() && s.address == address) {
                deposited += static_cast<double>(s.value);
                ++out_slots;
            }
    for (uint32_t idx : rec.withdrawal_txs)
        for (const auto& s : store.tx(idx).inputs)
            if (s.address == address) {
                withdrawn += static_cast<double>(s.value);
                ++in_slots;
            }

    const double n_txes = static_cast<double>(all.size());
    const double n_out = static_cast<double>(rec.deposit_txs.size());
    const double n_in = static_cast<double>(rec.withdrawal_txs.size());

    f[13] = deposited - withdrawn;
    f[14] = deposited;
    f[15] = withdrawn;
    f[16] = n_txes;
    f[17] = n_out;
    f[18] = n_in;

    std::size_t change_txes = 0;
    {
        std::vector<uint32_t> both;
        std::set_intersection(rec.deposit_txs.begin(), rec.deposit_txs.end(),
                              rec.withdrawal_txs.begin(), rec.withdrawal_txs.end(),
                              std::back_inserter(both));
        change_txes = both.size();
    }
    f[19] = n_txes > 0 ? static_cast<double>(change_txes) / n_txes : 0.0;
    f[20] = static_cast<double>(out_slots);
    f[21] = static_cast<double>(in_slots);

    // FIFO matching between the address's funding outputs and its spends; the
    // interchange format carries no outpoints, so ages use the oldest
    // available deposit. Leftover deposits are the unspent outputs.
    {
        struct Pending {
            uint32_t height;
            std::size_t count;
        };
        std::vector<Pending> queue;  // per deposit tx, slot multiplicity
        std::size_t q_head = 0;
        double age_sum = 0;
        std::size_t age_n = 0;
        std::size_t unspent = 0;
        std::size_t di = 0, wi = 0;
        auto spend_one = [&](uint32_t spend_height) {
            while (q_head < queue.size() && queue[q_head].count == 0) ++q_head;
            if (q_head == queue.size()) return;
            --queue[q_head].count;
            age_sum += static_cast<double>(spend_height) - queue[q_head].height;
            ++age_n;
        };
        while (di < rec.deposit_txs.size() || wi < rec.withdrawal_txs.size()) {
            // A self-change tx spends before it deposits: inputs consume
            // prior outputs only.
            bool take_deposit =
                wi == rec.withdrawal_txs.size() ||
                (di < rec.deposit_txs.size() && rec.deposit_txs[di] < rec.withdrawal_txs[wi]);
            if (take_deposit) {
                const Transaction& tx = store.tx(rec.deposit_txs[di]);
                std::size_t n = 0;
                for (const auto& s : tx.outputs)
                    if (!s.is_data() && s.address == address) ++n;
                queue.push_back({tx.height, n});
                ++di;
            } else {
                const Transaction& tx = store.tx(rec.withdrawal_txs[wi]);
                for (const auto& s : tx.inputs)
                    if (s.address == address) spend_one(tx.height);
                ++wi;
            }
        }
        for (std::size_t i = q_head; i < queue.size(); ++i) unspent += queue[i].count;
        f[22] = static_cast<double>(unspent);
        f[26] = age_n ? age_sum / static_cast<double>(age_n) : 0.0;
    }

    double size_sum = 0, weight_sum = 0, fee_sum = 0;
    double outs_sum = 0, ins_sum = 0;
    double outs_sum_out = 0, ins_sum_out = 0, outs_sum_in = 0, ins_sum_in = 0;
    std::size_t coinbase_n = 0, coinjoin_n = 0, coinjoin_out_n = 0, coinjoin_in_n = 0;
    std::set<uint32_t> deposit_set(rec.deposit_txs.begin(), rec.deposit_txs.end());
    std::set<uint32_t> withdrawal_set(rec.withdrawal_txs.begin(), rec.withdrawal_txs.end());
    for (uint32_t idx : all) {
        const Transaction& tx = store.tx(idx);
        size_sum += tx.size;
        weight_sum += tx.weight;
        fee_sum += static_cast<double>(tx_fee(tx));
        outs_sum += static_cast<double>(tx.outputs.size());
        ins_sum += static_cast<double>(tx.inputs.size());
        if (deposit_set.count(idx)) {
            outs_sum_out += static_cast<double>(tx.outputs.size());
            ins_sum_out += static_cast<double>(tx.inputs.size());
        }
        if (withdrawal_set.count(idx)) {
            outs_sum_in += static_cast<double>(tx.outputs.size());
            ins_sum_in += static_cast<double>(tx.inputs.size());
        }
        if (tx.coinbase) ++coinbase_n;
        if (detect_coinjoin(tx)) {
            ++coinjoin_n;
            if (deposit_set.count(idx)) ++coinjoin_out_n;
            if (withdrawal_set.count(idx)) ++coinjoin_in_n;
        }
    }

    f[23] = n_txes > 0 ? size_sum / n_txes : 0.0;
    f[24] = n_txes > 0 ? weight_sum / n_txes : 0.0;
    f[25] = n_txes > 0 ? fee_sum / n_txes : 0.0;
    f[27] = static_cast<double>(coinbase_n);
    f[28] = static_cast<double>(coinjoin_n);
    f[29] = static_cast<double>(coinjoin_out_n);
    f[30] = static_cast<double>(coinjoin_in_n);
    f[31] = n_out > 0 ? n_in / n_out : 0.0;
    f[32] = n_txes > 0 ? outs_sum / n_txes : 0.0;
    f[33] = n_txes > 0 ? ins_sum / n_txes : 0.0;
    f[34] = n_out > 0 ? outs_sum_out / n_out : 0.0;
    f[35] = n_out > 0 ? ins_sum_out / n_out : 0.0;
    f[36] = n_in > 0 ? outs_sum_in / n_in : 0.0;
    f[37] = n_in > 0 ? ins_sum_in / n_in : 0.0;
    f[38] = deposited / rate_denom;
    f[39] = withdrawn / rate_denom;
    f[40] = n_out > 0 ? deposited / n_out : 0.0;
    f[41] = n_in > 0 ? withdrawn / n_in : 0.0;
    return f;
}

std::string export_feature_csv(const ChainStore& store, const ClusterMap& clusters,
                               const std::vector<std::string>& addresses) {
    std::string csv = "address";
    for (const auto& name : feature_names()) csv += "," + name;
    csv += '\n';
    for (const auto& addr : addresses) {
        FeatureVector f = extract_features(store, clusters, addr);
        csv += addr;
        for (double v : f) {
            csv += ',';
            csv += nlohmann::json(v).dump();
        }
        csv += '\n';
    }
    return csv;
}

FeatureVector NormalizationParams::transform(const FeatureVector& x) const {
    FeatureVector out{};
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        out[i] = stddev[i] > 0 ? (x[i] - mean[i]) / stddev[i] : 0.0;
    return out;
}

NormalizationParams fit_normalizer(const std::vector<FeatureVector>& rows) {
    if (rows.size() < 2) throw InsufficientData("normalizer needs at least 2 rows");
    NormalizationParams p;
    const double n = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double sum = 0;
        for (const auto& r : rows) sum += r[i];
        p.mean[i] = sum / n;
        double sq = 0;
        for (const auto& r : rows) {
            double d = r[i] - p.mean[i];
            sq += d * d;
        }
        p.stddev[i] = std::sqrt(sq / n);
    }
    return p;
}

std::vector<MiRanking> rank_features_mi(const std::vector<FeatureVector>& rows,
                                        const std::vector<int>& labels, int bins) {
    if (rows.size() != labels.size() || rows.size() < 2)
        throw InsufficientData("MI ranking needs matched rows and labels");
    if (bins < 2) throw InsufficientData("MI ranking needs bins >= 2");
    const std::size_t n = rows.size();

    std::vector<MiRanking> out;
    for (std::size_t fi = 0; fi < kFeatureCount; ++fi) {
        // Equal-frequency thresholds; ties always share a bin.
        std::vector<double> sorted(n);
        for (std::size_t i = 0; i < n; ++i) sorted[i] = rows[i][fi];
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> thresholds;
        for (int b = 1; b < bins; ++b) {
            double t = sorted[n * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins)];
            if (thresholds.empty() || t > thresholds.back()) thresholds.push_back(t);
        }
        auto bin_of = [&](double v) {
            return static_cast<std::size_t>(
                std::lower_bound(thresholds.begin(), thresholds.end(),
                                 std::nextafter(v, std::numeric_limits<double>::max())) -
                thresholds.begin());
        };

        std::map<std::pair<std::size_t, int>, double> joint;
        std::map<std::size_t, double> pb;
        std::map<int, double> py;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t b = bin_of(rows[i][fi]);
            joint[{b, labels[i]}] += 1.0;
            pb[b] += 1.0;
            py[labels[i]] += 1.0;
        }
        double mi = 0;
        for (const auto& [key, cnt] : joint) {
            double pxy = cnt / static_cast<double>(n);
            double px = pb[key.first] / static_cast<double>(n);
            double plab = py[key.second] / static_cast<double>(n);
            mi += pxy * std::log(pxy / (px * plab));
        }
        out.push_back({feature_names()[fi], std::max(mi, 0.0)});
    }
    std::sort(out.begin(), out.end(), [](const MiRanking& a, const MiRanking& b) {
        if (a.mi_nats != b.mi_nats) return a.mi_nats > b.mi_nats;
        return a.feature < b.feature;
    });
    return out;
}

}  // namespace txtrace
