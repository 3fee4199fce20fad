#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <stdexcept>

#include "svmlab/detail/format.hpp"
#include "svmlab/svc.hpp"

// Layout, one record per line:
//
//   svmmodel v1
//   kernel <spec>
//   classes <id> <id> ...
//   pair <positive> <negative> <support vector count>
//   <coefficient> <idx>:<value> ...        (once per support vector)
//   bias <real>
//   sigmoid <A> <B>                         (optional)
//   ... further pairs ...
//   checksum <16 hex digits>
//
// Reals are hexadecimal-significand; the checksum is 64-bit FNV-1a over every
// byte preceding the checksum line.
namespace svmlab {

namespace {

constexpr int kFormatVersion = 1;

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    std::array<char, 17> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + 16, value, 16);
    std::string digits(buffer.data(), end);
    return std::string(16 - digits.size(), '0') + digits;
}

void write_machine(std::string& out, const BinaryModel& machine) {
    out += "pair " + std::to_string(machine.labels.positive) + ' ' + std::to_string(machine.labels.negative) + ' ' +
           std::to_string(machine.coefficients.size()) + '\n';
    for (std::size_t i = 0; i < machine.coefficients.size(); ++i) {
        out += detail::hex_double(machine.coefficients[i]);
        for (const auto& f : machine.support_vectors[i]) {
            out += ' ' + std::to_string(f.index) + ':' + detail::hex_double(f.value);
        }
        out += '\n';
    }
    out += "bias " + detail::hex_double(machine.bias) + '\n';
    if (machine.sigmoid) {
        out += "sigmoid " + detail::hex_double(machine.sigmoid->A) + ' ' + detail::hex_double(machine.sigmoid->B) +
               '\n';
    }
}

std::string finish(std::string body) {
    body += "checksum " + hex64(fnv1a(body)) + '\n';
    return body;
}

std::vector<std::string_view> tokens_of(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto space = line.find(' ', pos);
        const auto end = space == std::string_view::npos ? line.size() : space;
        if (end > pos) {
            out.push_back(line.substr(pos, end - pos));
        }
        pos = end + 1;
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::vector<std::string_view> lines) : lines_(std::move(lines)) {}

    bool done() const { return next_ >= lines_.size(); }

    std::vector<std::string_view> expect(std::string_view keyword) {
        if (done()) {
            fail("unexpected end of model, expected '" + std::string(keyword) + "'");
        }
        auto tokens = tokens_of(lines_[next_]);
        if (tokens.empty() || tokens.front() != keyword) {
            fail("expected '" + std::string(keyword) + "'");
        }
        ++next_;
        return tokens;
    }

    std::vector<std::string_view> take() {
        if (done()) {
            fail("unexpected end of model");
        }
        return tokens_of(lines_[next_++]);
    }

    bool peek(std::string_view keyword) const {
        if (done()) {
            return false;
        }
        const auto tokens = tokens_of(lines_[next_]);
        return !tokens.empty() && tokens.front() == keyword;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ModelFormatError("model line " + std::to_string(next_ + 1) + ": " + what);
    }

    double real(std::string_view token) const {
        const auto value = detail::parse_double(token);
        if (!value) {
            fail("malformed real '" + std::string(token) + "'");
        }
        return *value;
    }

    long long integer(std::string_view token) const {
        const auto value = detail::parse_integer(token);
        if (!value) {
            fail("malformed integer '" + std::string(token) + "'");
        }
        return *value;
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t next_ = 0;
};

BinaryModel read_machine(Reader& reader, const KernelSpec& kernel) {
    const auto header = reader.expect("pair");
    if (header.size() != 4) {
        reader.fail("pair line needs <positive> <negative> <count>");
    }
    BinaryModel machine;
    machine.kernel = kernel;
    machine.labels.positive = static_cast<int>(reader.integer(header[1]));
    machine.labels.negative = static_cast<int>(reader.integer(header[2]));
    const auto count = reader.integer(header[3]);
    if (count < 1) {
        reader.fail("a machine needs at least one support vector");
    }
    for (long long k = 0; k < count; ++k) {
        const auto tokens = reader.take();
        if (tokens.empty()) {
            reader.fail("empty support vector line");
        }
        machine.coefficients.push_back(reader.real(tokens[0]));
        SparseVector sv;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const auto colon = tokens[t].find(':');
            if (colon == std::string_view::npos) {
                reader.fail("expected <index>:<value>");
            }
            sv.push_back({static_cast<int>(reader.integer(tokens[t].substr(0, colon))),
                          reader.real(tokens[t].substr(colon + 1))});
        }
        try {
            validate_features(sv);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        machine.support_vectors.push_back(std::move(sv));
    }
    const auto bias = reader.expect("bias");
    if (bias.size() != 2) {
        reader.fail("bias line needs one value");
    }
    machine.bias = reader.real(bias[1]);
    if (reader.peek("sigmoid")) {
        const auto sig = reader.expect("sigmoid");
        if (sig.size() != 3) {
            reader.fail("sigmoid line needs A and B");
        }
        machine.sigmoid = SigmoidParams{reader.real(sig[1]), reader.real(sig[2])};
    }
    return machine;
}

} // namespace

std::string save_model(const MulticlassModel& model) {
    std::string out = "svmmodel v" + std::to_string(kFormatVersion) + '\n';
    const auto& kernel = model.machines.empty() ? KernelSpec::linear() : model.machines.front().kernel;
    out += "kernel " + kernel.to_string() + '\n';
    out += "classes";
    for (int c : model.classes) {
        out += ' ' + std::to_string(c);
    }
    out += '\n';
    for (const auto& machine : model.machines) {
        write_machine(out, machine);
    }
    return finish(std::move(out));
}

std::string save_model(const BinaryModel& model) {
    MulticlassModel wrapper;
    wrapper.classes = {std::min(model.labels.positive, model.labels.negative),
                       std::max(model.labels.positive, model.labels.negative)};
    wrapper.machines.push_back(model);
    return save_model(wrapper);
}

MulticlassModel load_model(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto newline = text.find('\n', pos);
        if (newline == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, newline - pos));
        pos = newline + 1;
    }
    if (lines.empty()) {
        throw ModelFormatError("empty model file");
    }

    const auto magic = tokens_of(lines.front());
    if (magic.size() != 2 || magic[0] != "svmmodel" || magic[1].size() < 2 || magic[1][0] != 'v') {
        throw ModelFormatError("not an svmmodel file");
    }
    const auto version = detail::parse_integer(magic[1].substr(1));
    if (!version) {
        throw ModelFormatError("malformed model version '" + std::string(magic[1]) + "'");
    }
    if (*version != kFormatVersion) {
        throw ModelFormatError("unsupported model version " + std::to_string(*version) + " (this build reads version " +
                               std::to_string(kFormatVersion) + ")");
    }

    const auto last = tokens_of(lines.back());
    if (last.size() != 2 || last[0] != "checksum") {
        throw ModelFormatError("missing checksum line");
    }
    const auto body = text.substr(0, static_cast<std::size_t>(lines.back().data() - text.data()));
    if (hex64(fnv1a(body)) != last[1]) {
        throw ModelFormatError("checksum mismatch: model file is corrupted");
    }
    lines.pop_back();

    Reader reader(std::vector<std::string_view>(lines.begin() + 1, lines.end()));
    const auto kernel_line = reader.expect("kernel");
    if (kernel_line.size() != 2) {
        reader.fail("kernel line needs one spec");
    }
    KernelSpec kernel = KernelSpec::linear();
    try {
        kernel = KernelSpec::parse(kernel_line[1]);
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }

    MulticlassModel model;
    const auto classes = reader.expect("classes");
    for (std::size_t t = 1; t < classes.size(); ++t) {
        model.classes.push_back(static_cast<int>(reader.integer(classes[t])));
    }
    if (model.classes.size() < 2 || !std::is_sorted(model.classes.begin(), model.classes.end()) ||
        std::adjacent_find(model.classes.begin(), model.classes.end()) != model.classes.end()) {
        reader.fail("classes must be at least two distinct ids in ascending order");
    }
    while (!reader.done()) {
        model.machines.push_back(read_machine(reader, kernel));
    }
    const std::size_t n = model.classes.size();
    if (model.machines.size() != n * (n - 1) / 2) {
        throw ModelFormatError("expected " + std::to_string(n * (n - 1) / 2) + " machines, found " +
                               std::to_string(model.machines.size()));
    }
    if (model.machines.size() > 1) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const auto& labels = model.machines[model.machine_index(a, b)].labels;
                if (labels != LabelPair{model.classes[a], model.classes[b]}) {
                    throw ModelFormatError("machines are not in pairwise class order");
                }
            }
        }
    } else {
        const auto& labels = model.machines.front().labels;
        if (std::min(labels.positive, labels.negative) != model.classes[0] ||
            std::max(labels.positive, labels.negative) != model.classes[1]) {
            throw ModelFormatError("pair labels do not match the class list");
        }
    }
    return model;
}

BinaryModel load_binary_model(std::string_view text) {
    auto model = load_model(text);
    if (model.machines.size() != 1) {
        throw ModelFormatError("expected a single binary machine, found " + std::to_string(model.machines.size()));
    }
    return std::move(model.machines.front());
}

} // namespace svmlab
