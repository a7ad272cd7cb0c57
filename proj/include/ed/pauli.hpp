#ifndef ED_PAULI_HPP
#define ED_PAULI_HPP

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ed {

enum class PauliLetter : unsigned char { I = 0, X = 1, Y = 2, Z = 3 };

/// Phase-tracked N-qubit Pauli word: phase i^p (p in 0..3) times a tensor
/// product of single-qubit letters.
class PauliString {
public:
    PauliString() = default;
    PauliString(std::vector<PauliLetter> letters, int phase_power = 0);

    static PauliString identity(int n);
    /// Parses e.g. "ZI", "+IX", "-YY", "iX", "-iZZ".
    static PauliString parse(std::string_view text);

    int size() const { return static_cast<int>(letters_.size()); }
    const std::vector<PauliLetter>& letters() const { return letters_; }
    /// Power p of the tracked phase i^p, in 0..3.
    int phase_power() const { return phase_power_; }
    std::complex<double> phase() const;
    bool is_identity_word() const;  // letters all I, any phase

    std::string str() const;
    /// Dense matrix, exact phase included. Guarded at 10 qubits.
    Eigen::MatrixXcd to_matrix() const;

    bool operator==(const PauliString& o) const {
        return phase_power_ == o.phase_power_ && letters_ == o.letters_;
    }

private:
    std::vector<PauliLetter> letters_;
    int phase_power_ = 0;
};

PauliString pauli_mul(const PauliString& p, const PauliString& q);

/// True iff the words commute: even number of positions with distinct
/// non-identity letters. Phases do not matter.
bool pauli_commutes(const PauliString& p, const PauliString& q);

/// Grid (or explicit-context) table of Pauli observables. Every context is
/// a mutually commuting set whose ordered product is +/- identity.
class ObservableTable {
public:
    struct Context {
        std::string name;
        std::vector<int> cells;  // indices into cells()
    };

    /// Row-major grid; contexts are the rows and columns (singleton
    /// row/column contexts from a 1-row or 1-column grid are dropped).
    static ObservableTable from_grid(int rows, int cols, std::vector<PauliString> cells);
    /// One explicit context covering all given cells.
    static ObservableTable single_context(std::vector<PauliString> cells);
    /// The standard 3x3 two-qubit parity square.
    static ObservableTable mermin_square();
    /// Plain-text grid: one row per line, whitespace-separated cells,
    /// optional leading '+'/'-'/'i'/'-i' per cell.
    static ObservableTable parse(const std::string& text);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n_cells() const { return static_cast<int>(cells_.size()); }
    int n_qubits() const { return cells_.empty() ? 0 : cells_.front().size(); }
    const std::vector<PauliString>& cells() const { return cells_; }
    const PauliString& at(int i, int j) const;  // grid access
    const std::vector<Context>& contexts() const { return contexts_; }

private:
    ObservableTable() = default;
    void validate() const;

    int rows_ = 0;
    int cols_ = 0;
    std::vector<PauliString> cells_;
    std::vector<Context> contexts_;
};

struct ContextProduct {
    std::string context;
    int sign = +1;        // product is sign * identity
    PauliString product;  // exact product, phase included
};

/// Ordered (left-to-right) product of every context; throws if a product
/// is not +/- identity.
std::vector<ContextProduct> context_products(const ObservableTable& table);

/// Product of all context signs.
int grand_product_sign(const std::vector<ContextProduct>& products);

}  // namespace ed

#endif
