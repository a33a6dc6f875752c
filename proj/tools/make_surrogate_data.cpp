// Regenerates the bundled datasets in data/.
//
// The four benchmark tables are deterministic synthetic surrogates: same
// sample counts, feature counts, class balance and column flavor as the
// published UCI/PMLB tables they stand in for. Class-conditional
// distributions overlap substantially, so the conditional class probability
// varies smoothly across feature space the way it does in the real tables;
// deep tree leaves land on genuinely uncertain regions and calibration has
// something to correct. They are not the original records; manifest.json
// says so.

#include "treesmooth/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

using treesmooth::SplitMix64;

namespace {

double normal(SplitMix64& rng, double mu, double sigma) {
    const double u1 = 1.0 - rng.next_double();
    const double u2 = rng.next_double();
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int categorical(SplitMix64& rng, const std::vector<double>& probs) {
    double u = rng.next_double();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (u < probs[i]) return static_cast<int>(i);
        u -= probs[i];
    }
    return static_cast<int>(probs.size()) - 1;
}

// Geometric-flavored count with the given mean.
int skewed_count(SplitMix64& rng, double mean) {
    return static_cast<int>(std::floor(-mean * std::log(1.0 - rng.next_double())));
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

int iclamp(double v, int lo, int hi) {
    return static_cast<int>(clamp(std::llround(v), lo, hi));
}

double round_to(double v, int decimals) {
    const double f = std::pow(10.0, decimals);
    return std::llround(v * f) / f;
}

struct Table {
    std::vector<std::string> columns; // label column last
    std::vector<std::vector<double>> rows;
};

void write_table(const Table& t, const std::string& path) {
    std::ofstream out(path);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << t.columns[c] << (c + 1 < t.columns.size() ? ',' : '\n');
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            const double v = row[c];
            if (v == std::floor(v)) out << static_cast<long long>(v);
            else out << v;
            out << (c + 1 < row.size() ? ',' : '\n');
        }
    }
}

// Builds rows with exact per-class counts, shuffled into a mixed order.
Table build(SplitMix64& rng, std::vector<std::string> columns, int n0, int n1,
            const std::function<std::vector<double>(SplitMix64&, int)>& sample_row) {
    Table t;
    t.columns = std::move(columns);
    for (int y = 0; y < 2; ++y) {
        const int count = y == 0 ? n0 : n1;
        for (int i = 0; i < count; ++i) {
            auto row = sample_row(rng, y);
            row.push_back(y);
            t.rows.push_back(std::move(row));
        }
    }
    rng.shuffle(t.rows);
    return t;
}

Table make_breast_cancer() {
    SplitMix64 rng(0xB4EA57);
    return build(
        rng,
        {"age_group", "menopause", "tumor_size", "inv_nodes", "node_caps", "deg_malig", "breast",
         "breast_quad", "irradiat", "recurrence"},
        196, 81, [](SplitMix64& g, int y) -> std::vector<double> {
            const double age = iclamp(normal(g, y ? 4.9 : 5.2, 1.5), 1, 9);
            const int menopause = age >= 5 ? (g.next_double() < 0.85 ? 2 : 1)
                                           : (g.next_double() < 0.75 ? 0 : 1);
            const double tumor = iclamp(normal(g, y ? 5.4 : 4.4, 2.3), 0, 11);
            const double nodes = iclamp(skewed_count(g, y ? 2.5 : 1.0), 0, 12);
            const double caps = g.next_double() < (y ? 0.30 : 0.10) ? 1 : 0;
            const double malig =
                1 + categorical(g, y ? std::vector<double>{0.17, 0.40, 0.43}
                                     : std::vector<double>{0.30, 0.48, 0.22});
            const double breast = g.next_double() < 0.53 ? 0 : 1;
            const double quad = categorical(g, {0.35, 0.22, 0.2, 0.13, 0.1});
            const double irradiat = g.next_double() < (y ? 0.32 : 0.18) ? 1 : 0;
            return {age, static_cast<double>(menopause), tumor, nodes, caps, malig,
                    breast, quad, irradiat};
        });
}

Table make_haberman() {
    SplitMix64 rng(0x4ABE12);
    return build(rng, {"age", "op_year", "axil_nodes", "survival"}, 81, 225,
                 [](SplitMix64& g, int y) -> std::vector<double> {
                     // class 0 = died within 5 years, class 1 = survived
                     const double age = iclamp(normal(g, y ? 51.5 : 55.0, 10.5), 30, 83);
                     const double year = iclamp(normal(g, 62.5, 3.2), 58, 69);
                     const double nodes = iclamp(skewed_count(g, y ? 2.0 : 5.0), 0, 52);
                     return {age, year, nodes};
                 });
}

Table make_heart() {
    SplitMix64 rng(0x6EA27);
    return build(
        rng,
        {"age", "sex", "chest_pain", "rest_bp", "cholesterol", "fasting_blood_sugar", "rest_ecg",
         "max_heart_rate", "exercise_angina", "st_depression", "slope", "major_vessels",
         "thal_normal", "thal_fixed", "thal_reversible", "disease"},
        150, 120, [](SplitMix64& g, int y) -> std::vector<double> {
            const double age = iclamp(normal(g, y ? 56.5 : 52.0, 8.7), 29, 77);
            const double sex = g.next_double() < (y ? 0.76 : 0.58) ? 1 : 0;
            const double cp = 1 + categorical(g, y ? std::vector<double>{0.09, 0.15, 0.28, 0.48}
                                                   : std::vector<double>{0.28, 0.31, 0.25, 0.16});
            const double bp = iclamp(normal(g, y ? 134.0 : 129.0, 17.5), 94, 200);
            const double chol = iclamp(normal(g, y ? 254.0 : 245.0, 49.0), 126, 564);
            const double fbs = g.next_double() < 0.15 ? 1 : 0;
            const double ecg = categorical(g, y ? std::vector<double>{0.48, 0.05, 0.47}
                                                : std::vector<double>{0.58, 0.04, 0.38});
            const double hr = iclamp(normal(g, y ? 141.0 : 156.5, 19.5), 71, 202);
            const double angina = g.next_double() < (y ? 0.52 : 0.17) ? 1 : 0;
            const double st = round_to(clamp(normal(g, y ? 1.4 : 0.5, y ? 1.05 : 0.7), 0.0, 6.2), 1);
            const double slope = 1 + categorical(g, y ? std::vector<double>{0.32, 0.55, 0.13}
                                                      : std::vector<double>{0.52, 0.42, 0.06});
            const double vessels =
                categorical(g, y ? std::vector<double>{0.38, 0.29, 0.20, 0.13}
                                 : std::vector<double>{0.72, 0.17, 0.08, 0.03});
            const int thal = categorical(g, y ? std::vector<double>{0.40, 0.08, 0.52}
                                              : std::vector<double>{0.72, 0.06, 0.22});
            return {age,    sex,   cp,     bp,
                    chol,   fbs,   ecg,    hr,
                    angina, st,    slope,  vessels,
                    thal == 0 ? 1.0 : 0.0, thal == 1 ? 1.0 : 0.0, thal == 2 ? 1.0 : 0.0};
        });
}

Table make_diabetes() {
    SplitMix64 rng(0xD1AB37E5);
    return build(
        rng,
        {"pregnancies", "glucose", "blood_pressure", "skin_thickness", "insulin", "bmi",
         "pedigree", "age", "outcome"},
        500, 268, [](SplitMix64& g, int y) -> std::vector<double> {
            const double preg = iclamp(skewed_count(g, y ? 4.4 : 3.2), 0, 17);
            const double glucose = iclamp(normal(g, y ? 136.0 : 112.0, y ? 30.0 : 25.0), 44, 199);
            const double bp = iclamp(normal(g, y ? 71.0 : 68.0, 17.5), 24, 122);
            const double skin = iclamp(normal(g, y ? 30.5 : 27.0, 10.2), 7, 99);
            const double insulin = iclamp(std::exp(normal(g, y ? 4.65 : 4.35, 0.66)), 14, 846);
            const double bmi = round_to(clamp(normal(g, y ? 34.3 : 30.6, 6.9), 18.2, 67.1), 1);
            const double pedigree =
                round_to(clamp(std::exp(normal(g, y ? -0.78 : -0.95, 0.55)), 0.078, 2.42), 3);
            const double age = iclamp(21 + skewed_count(g, y ? 14.0 : 10.0), 21, 81);
            return {preg, glucose, bp, skin, insulin, bmi, pedigree, age};
        });
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";

    struct Entry {
        const char* file;
        Table table;
        const char* stands_in_for;
    };
    Entry entries[] = {
        {"breast_cancer.csv", make_breast_cancer(), "UCI breast cancer (Ljubljana), complete rows"},
        {"haberman.csv", make_haberman(), "UCI Haberman's survival"},
        {"heart.csv", make_heart(), "Statlog heart (thal one-hot encoded)"},
        {"diabetes.csv", make_diabetes(), "Pima Indians diabetes"},
    };

    std::string manifest = "{\n  \"datasets\": [\n";
    bool first = true;
    for (const auto& e : entries) {
        write_table(e.table, dir + "/" + e.file);
        int n1 = 0;
        for (const auto& row : e.table.rows) n1 += row.back() == 1.0 ? 1 : 0;
        const int n = static_cast<int>(e.table.rows.size());
        const int d = static_cast<int>(e.table.columns.size()) - 1;
        std::string name(e.file);
        name = name.substr(0, name.size() - 4);
        if (!first) manifest += ",\n";
        first = false;
        manifest += "    {\n      \"name\": \"" + name + "\",\n      \"file\": \"" + e.file +
                    "\",\n      \"samples\": " + std::to_string(n) +
                    ",\n      \"features\": " + std::to_string(d) +
                    ",\n      \"class0\": " + std::to_string(n - n1) +
                    ",\n      \"class1\": " + std::to_string(n1) +
                    ",\n      \"source\": \"synthetic surrogate (tools/make_surrogate_data.cpp, fixed seed); dimensions and class balance of " +
                    std::string(e.stands_in_for) + "\"\n    }";
        std::printf("%s: %d samples, %d features, classes %d/%d\n", e.file, n, d, n - n1, n1);
    }
    manifest += "\n  ]\n}\n";
    std::ofstream(dir + "/manifest.json") << manifest;
    return 0;
}
