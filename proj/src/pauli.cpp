#include "ed/pauli.hpp"

#include <sstream>
#include <stdexcept>

namespace ed {

namespace {

// Single-qubit products: result letter and phase power of i.
// mul_letter[a][b] for a*b.
struct LetterProduct {
    PauliLetter letter;
    int phase_power;
};

LetterProduct mul_letter(PauliLetter a, PauliLetter b) {
    using L = PauliLetter;
    if (a == L::I) return {b, 0};
    if (b == L::I) return {a, 0};
    if (a == b) return {L::I, 0};
    // Cyclic: XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
    switch (static_cast<int>(a) * 4 + static_cast<int>(b)) {
        case 4 * 1 + 2: return {L::Z, 1};   // XY
        case 4 * 2 + 1: return {L::Z, 3};   // YX
        case 4 * 2 + 3: return {L::X, 1};   // YZ
        case 4 * 3 + 2: return {L::X, 3};   // ZY
        case 4 * 3 + 1: return {L::Y, 1};   // ZX
        case 4 * 1 + 3: return {L::Y, 3};   // XZ
    }
    throw std::logic_error("mul_letter: unreachable");
}

char letter_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

Eigen::Matrix2cd letter_matrix(PauliLetter l) {
    const std::complex<double> i(0.0, 1.0);
    Eigen::Matrix2cd m;
    switch (l) {
        case PauliLetter::I: m << 1, 0, 0, 1; break;
        case PauliLetter::X: m << 0, 1, 1, 0; break;
        case PauliLetter::Y: m << 0, -i, i, 0; break;
        case PauliLetter::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

}  // namespace

PauliString::PauliString(std::vector<PauliLetter> letters, int phase_power)
    : letters_(std::move(letters)), phase_power_(((phase_power % 4) + 4) % 4) {
    if (letters_.empty()) throw std::invalid_argument("PauliString: empty letter sequence");
}

PauliString PauliString::identity(int n) {
    if (n <= 0) throw std::invalid_argument("PauliString: qubit count must be positive");
    return PauliString(std::vector<PauliLetter>(n, PauliLetter::I));
}

PauliString PauliString::parse(std::string_view text) {
    int phase_power = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') phase_power = 2;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase_power += 1;
        ++pos;
    }
    std::vector<PauliLetter> letters;
    for (; pos < text.size(); ++pos) {
        switch (text[pos]) {
            case 'I': letters.push_back(PauliLetter::I); break;
            case 'X': letters.push_back(PauliLetter::X); break;
            case 'Y': letters.push_back(PauliLetter::Y); break;
            case 'Z': letters.push_back(PauliLetter::Z); break;
            default:
                throw std::invalid_argument("PauliString: bad character '" +
                                            std::string(1, text[pos]) + "' in '" +
                                            std::string(text) + "'");
        }
    }
    return PauliString(std::move(letters), phase_power);
}

std::complex<double> PauliString::phase() const {
    static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_power_];
}

bool PauliString::is_identity_word() const {
    for (PauliLetter l : letters_) {
        if (l != PauliLetter::I) return false;
    }
    return true;
}

std::string PauliString::str() const {
    static const char* prefix[4] = {"+", "i", "-", "-i"};
    std::string out = prefix[phase_power_];
    for (PauliLetter l : letters_) out += letter_char(l);
    return out;
}

Eigen::MatrixXcd PauliString::to_matrix() const {
    if (size() > 10) throw std::invalid_argument("PauliString: matrix form limited to 10 qubits");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(1, 1, phase());
    for (PauliLetter l : letters_) {
        Eigen::Matrix2cd f = letter_matrix(l);
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        next.topLeftCorner(m.rows(), m.cols()) = f(0, 0) * m;
        next.topRightCorner(m.rows(), m.cols()) = f(0, 1) * m;
        next.bottomLeftCorner(m.rows(), m.cols()) = f(1, 0) * m;
        next.bottomRightCorner(m.rows(), m.cols()) = f(1, 1) * m;
        m = std::move(next);
    }
    return m;
}

PauliString pauli_mul(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) throw std::invalid_argument("pauli_mul: length mismatch");
    std::vector<PauliLetter> letters(p.size());
    int phase = p.phase_power() + q.phase_power();
    for (int i = 0; i < p.size(); ++i) {
        LetterProduct lp = mul_letter(p.letters()[i], q.letters()[i]);
        letters[i] = lp.letter;
        phase += lp.phase_power;
    }
    return PauliString(std::move(letters), phase);
}

bool pauli_commutes(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) throw std::invalid_argument("pauli_commutes: length mismatch");
    int anticommuting = 0;
    for (int i = 0; i < p.size(); ++i) {
        PauliLetter a = p.letters()[i];
        PauliLetter b = q.letters()[i];
        if (a != PauliLetter::I && b != PauliLetter::I && a != b) ++anticommuting;
    }
    return anticommuting % 2 == 0;
}

const PauliString& ObservableTable::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
        throw std::out_of_range("ObservableTable: cell index out of range");
    }
    return cells_[i * cols_ + j];
}

void ObservableTable::validate() const {
    const int n = n_qubits();
    for (const auto& cell : cells_) {
        if (cell.size() != n) {
            throw std::invalid_argument("ObservableTable: mixed qubit counts");
        }
    }
    for (const auto& ctx : contexts_) {
        for (std::size_t i = 0; i < ctx.cells.size(); ++i) {
            for (std::size_t j = i + 1; j < ctx.cells.size(); ++j) {
                if (!pauli_commutes(cells_[ctx.cells[i]], cells_[ctx.cells[j]])) {
                    throw std::invalid_argument("ObservableTable: context " + ctx.name +
                                                " contains non-commuting pair " +
                                                cells_[ctx.cells[i]].str() + ", " +
                                                cells_[ctx.cells[j]].str());
                }
            }
        }
        PauliString prod = PauliString::identity(n);
        for (int c : ctx.cells) prod = pauli_mul(prod, cells_[c]);
        if (!prod.is_identity_word() || prod.phase_power() % 2 != 0) {
            throw std::invalid_argument("ObservableTable: context " + ctx.name +
                                        " product is " + prod.str() + ", not +/- identity");
        }
    }
}

ObservableTable ObservableTable::from_grid(int rows, int cols, std::vector<PauliString> cells) {
    if (rows <= 0 || cols <= 0 || cells.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("ObservableTable: grid shape mismatch");
    }
    ObservableTable t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.cells_ = std::move(cells);
    if (cols > 1) {
        for (int i = 0; i < rows; ++i) {
            Context ctx{"row" + std::to_string(i + 1), {}};
            for (int j = 0; j < cols; ++j) ctx.cells.push_back(i * cols + j);
            t.contexts_.push_back(std::move(ctx));
        }
    }
    if (rows > 1) {
        for (int j = 0; j < cols; ++j) {
            Context ctx{"col" + std::to_string(j + 1), {}};
            for (int i = 0; i < rows; ++i) ctx.cells.push_back(i * cols + j);
            t.contexts_.push_back(std::move(ctx));
        }
    }
    t.validate();
    return t;
}

ObservableTable ObservableTable::single_context(std::vector<PauliString> cells) {
    const int n = static_cast<int>(cells.size());
    return from_grid(1, n, std::move(cells));
}

ObservableTable ObservableTable::mermin_square() {
    std::vector<PauliString> cells;
    for (const char* s : {"ZI", "IX", "ZX", "IZ", "XI", "XZ", "ZZ", "XX", "YY"}) {
        cells.push_back(PauliString::parse(s));
    }
    return from_grid(3, 3, std::move(cells));
}

ObservableTable ObservableTable::parse(const std::string& text) {
    std::vector<PauliString> cells;
    int rows = 0;
    int cols = -1;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream words(line);
        std::string word;
        int row_cols = 0;
        while (words >> word) {
            cells.push_back(PauliString::parse(word));
            ++row_cols;
        }
        if (row_cols == 0) continue;  // blank line
        if (cols == -1) cols = row_cols;
        if (row_cols != cols) {
            throw std::invalid_argument("ObservableTable: ragged grid in text table");
        }
        ++rows;
    }
    if (rows == 0) throw std::invalid_argument("ObservableTable: empty text table");
    return from_grid(rows, cols, std::move(cells));
}

std::vector<ContextProduct> context_products(const ObservableTable& table) {
    std::vector<ContextProduct> out;
    for (const auto& ctx : table.contexts()) {
        PauliString prod = PauliString::identity(table.n_qubits());
        for (int c : ctx.cells) prod = pauli_mul(prod, table.cells()[c]);
        // validate() guarantees +/- identity here.
        out.push_back(ContextProduct{ctx.name, prod.phase_power() == 0 ? +1 : -1, prod});
    }
    return out;
}

int grand_product_sign(const std::vector<ContextProduct>& products) {
    int sign = 1;
    for (const auto& p : products) sign *= p.sign;
    return sign;
}

}  // namespace ed
