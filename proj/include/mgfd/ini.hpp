#pragma once

// Structured-text documents: "[section]" headers followed by "key = value"
// lines.  Values are strings, numbers, whitespace-separated vectors, or
// matrices with ';' between rows.  Numbers are written with max_digits10
// precision so that doubles round-trip bit-exactly.

#include <Eigen/Dense>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mgfd::ini {

inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

class Document {
public:
    bool has(const std::string& section, const std::string& key) const {
        auto sec = sections_.find(section);
        return sec != sections_.end() && sec->second.count(key) > 0;
    }

    std::vector<std::string> section_names() const {
        std::vector<std::string> names;
        for (const auto& entry : order_) names.push_back(entry);
        return names;
    }

    bool has_section(const std::string& section) const {
        return sections_.count(section) > 0;
    }

    std::vector<std::string> keys(const std::string& section) const {
        std::vector<std::string> out;
        auto sec = sections_.find(section);
        if (sec == sections_.end()) return out;
        for (const auto& key : key_order_.at(section)) out.push_back(key);
        return out;
    }

    const std::string& get_string(const std::string& section, const std::string& key) const {
        auto sec = sections_.find(section);
        if (sec == sections_.end())
            throw std::runtime_error("missing section [" + section + "]");
        auto it = sec->second.find(key);
        if (it == sec->second.end())
            throw std::runtime_error("missing key '" + key + "' in section [" + section + "]");
        return it->second;
    }

    double get_number(const std::string& section, const std::string& key) const {
        return parse_number(get_string(section, key), section, key);
    }

    double get_number_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? get_number(section, key) : fallback;
    }

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
        return has(section, key) ? get_string(section, key) : fallback;
    }

    Eigen::VectorXd get_vector(const std::string& section, const std::string& key) const {
        std::vector<double> vals = split_numbers(get_string(section, key), section, key);
        return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }

    Eigen::MatrixXd get_matrix(const std::string& section, const std::string& key) const {
        const std::string& text = get_string(section, key);
        std::vector<std::vector<double>> rows;
        std::string row;
        std::stringstream ss(text);
        while (std::getline(ss, row, ';'))
            rows.push_back(split_numbers(row, section, key));
        if (rows.empty()) return {};
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows.front().size()));
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.front().size())
                throw std::runtime_error("ragged matrix for key '" + key + "'");
            for (size_t j = 0; j < rows[i].size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return m;
    }

    void set_string(const std::string& section, const std::string& key, std::string value) {
        touch(section, key);
        sections_[section][key] = std::move(value);
    }

    void set_number(const std::string& section, const std::string& key, double value) {
        set_string(section, key, format_number(value));
    }

    template <typename Derived>
    void set_vector(const std::string& section, const std::string& key,
                    const Eigen::MatrixBase<Derived>& v) {
        std::string text;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (i) text += ' ';
            text += format_number(v(i));
        }
        set_string(section, key, std::move(text));
    }

    template <typename Derived>
    void set_matrix(const std::string& section, const std::string& key,
                    const Eigen::MatrixBase<Derived>& m) {
        std::string text;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i) text += " ; ";
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (j) text += ' ';
                text += format_number(m(i, j));
            }
        }
        set_string(section, key, std::move(text));
    }

    std::string to_string() const {
        std::string out;
        for (const auto& section : order_) {
            out += "[" + section + "]\n";
            for (const auto& key : key_order_.at(section))
                out += key + " = " + sections_.at(section).at(key) + "\n";
            out += "\n";
        }
        return out;
    }

    static Document parse(const std::string& text) {
        Document doc;
        std::string current;
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            if (trimmed.front() == '[') {
                if (trimmed.back() != ']')
                    throw std::runtime_error("malformed section header at line " + std::to_string(lineno));
                current = trim(trimmed.substr(1, trimmed.size() - 2));
                doc.touch_section(current);
                continue;
            }
            auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("expected 'key = value' at line " + std::to_string(lineno));
            std::string key = trim(trimmed.substr(0, eq));
            std::string value = trim(trimmed.substr(eq + 1));
            if (current.empty())
                throw std::runtime_error("key '" + key + "' outside any section at line " +
                                         std::to_string(lineno));
            doc.set_string(current, key, value);
        }
        return doc;
    }

    static Document load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse(buffer.str());
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'");
        out << to_string();
    }

private:
    static std::string trim(const std::string& s) {
        size_t begin = 0, end = s.size();
        while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
        while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
        return s.substr(begin, end - begin);
    }

    static double parse_number(const std::string& text, const std::string& section,
                               const std::string& key) {
        try {
            size_t used = 0;
            double value = std::stod(text, &used);
            while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
            if (used != text.size()) throw std::invalid_argument("trailing junk");
            return value;
        } catch (const std::exception&) {
            throw std::runtime_error("key '" + key + "' in [" + section + "] is not a number: '" +
                                     text + "'");
        }
    }

    static std::vector<double> split_numbers(const std::string& text, const std::string& section,
                                             const std::string& key) {
        std::vector<double> vals;
        std::stringstream ss(text);
        std::string tok;
        while (ss >> tok) vals.push_back(parse_number(tok, section, key));
        if (vals.empty())
            throw std::runtime_error("key '" + key + "' in [" + section + "] has no numeric entries");
        return vals;
    }

    void touch_section(const std::string& section) {
        if (!sections_.count(section)) {
            sections_[section] = {};
            key_order_[section] = {};
            order_.push_back(section);
        }
    }

    void touch(const std::string& section, const std::string& key) {
        touch_section(section);
        if (!sections_[section].count(key)) key_order_[section].push_back(key);
    }

    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::map<std::string, std::vector<std::string>> key_order_;
    std::vector<std::string> order_;
};

}  // namespace mgfd::ini
