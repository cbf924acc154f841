#include "tprof/graph_io.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tprof {

namespace {

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- DOT reader -------------------------------------------------------------

struct Token {
    enum Kind { id, punct, arrow, end } kind;
    std::string text;
};

class DotLexer {
public:
    explicit DotLexer(std::string src) : src_(std::move(src)) {}

    Token next() {
        skip_space();
        if (pos_ >= src_.size()) return {Token::end, {}};
        const char c = src_[pos_];
        if (c == '"') return {Token::id, quoted()};
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            pos_ += 2;
            return {Token::arrow, "->"};
        }
        if (std::string_view("{}[]=,;").find(c) != std::string_view::npos) {
            ++pos_;
            return {Token::punct, std::string(1, c)};
        }
        std::string word;
        while (pos_ < src_.size()) {
            const char w = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(w)) || w == '_' || w == '.' || w == '+' ||
                (w == '-' && !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '>')) ||
                static_cast<unsigned char>(w) >= 0x80) {
                word += w;
                ++pos_;
            } else {
                break;
            }
        }
        if (word.empty()) throw DataError(std::string("DOT: unexpected character '") + c + "' at line " + line());
        return {Token::id, word};
    }

private:
    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                const auto close = src_.find("*/", pos_ + 2);
                if (close == std::string::npos) throw DataError("DOT: unterminated comment");
                pos_ = close + 2;
            } else {
                break;
            }
        }
    }

    std::string quoted() {
        std::string out;
        ++pos_;
        while (pos_ < src_.size() && src_[pos_] != '"') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size() &&
                (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\'))
                ++pos_;
            out += src_[pos_++];
        }
        if (pos_ >= src_.size()) throw DataError("DOT: unterminated string");
        ++pos_;
        return out;
    }

    std::string line() const {
        return std::to_string(1 + std::count(src_.begin(), src_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n'));
    }

    std::string src_;
    std::size_t pos_ = 0;
};

using Attributes = std::vector<std::pair<std::string, std::string>>;

class DotParser {
public:
    explicit DotParser(std::string src) : lex_(std::move(src)) { advance(); }

    MovementGraph parse() {
        if (tok_.kind == Token::id && tok_.text == "strict") advance();
        if (tok_.kind != Token::id || tok_.text != "digraph") throw DataError("DOT: expected 'digraph'");
        advance();
        if (tok_.kind == Token::id) advance();  // graph name
        expect("{");
        while (!(tok_.kind == Token::punct && tok_.text == "}")) {
            if (tok_.kind == Token::end) throw DataError("DOT: missing '}'");
            statement();
        }
        return builder_.build();
    }

private:
    void advance() { tok_ = lex_.next(); }

    void expect(const char* p) {
        if (tok_.kind != Token::punct || tok_.text != p) throw DataError(std::string("DOT: expected '") + p + "'");
        advance();
    }

    bool at(const char* p) const { return tok_.kind == Token::punct && tok_.text == p; }

    Attributes attributes() {
        Attributes attrs;
        while (at("[")) {
            advance();
            while (!at("]")) {
                if (tok_.kind != Token::id) throw DataError("DOT: expected attribute name");
                std::string key = tok_.text;
                advance();
                expect("=");
                if (tok_.kind != Token::id) throw DataError("DOT: expected attribute value");
                attrs.emplace_back(std::move(key), tok_.text);
                advance();
                if (at(",") || at(";")) advance();
            }
            advance();
        }
        return attrs;
    }

    static double number(const std::string& s) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw DataError("DOT: bad number '" + s + "'");
        return v;
    }

    void statement() {
        if (at(";")) {
            advance();
            return;
        }
        if (tok_.kind != Token::id) throw DataError("DOT: expected statement");
        std::string first = tok_.text;
        advance();

        if (first == "graph" || first == "node" || first == "edge") {
            if (at("[")) {
                attributes();
                return;
            }
        }
        if (at("=")) {  // graph attribute
            advance();
            advance();
            return;
        }
        if (tok_.kind == Token::arrow) {
            std::vector<std::string> chain{first};
            while (tok_.kind == Token::arrow) {
                advance();
                if (tok_.kind != Token::id) throw DataError("DOT: expected node id after '->'");
                chain.push_back(tok_.text);
                advance();
            }
            double w = 1.0;
            for (const auto& [k, v] : attributes())
                if (k == "weight") w = number(v);
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) builder_.add_arc(chain[i], chain[i + 1], w);
            return;
        }

        GraphNode node{first, first, 0, false};
        if (auto it = known_.find(first); it != known_.end()) node = it->second;
        for (const auto& [k, v] : attributes()) {
            if (k == "name")
                node.name = v;
            else if (k == "support")
                node.support = static_cast<std::int64_t>(number(v));
            else if (k == "mainstream")
                node.mainstream = v == "true" || v == "1";
        }
        known_[first] = node;
        builder_.add_node(node);
    }

    DotLexer lex_;
    Token tok_{Token::end, {}};
    GraphBuilder builder_;
    std::map<std::string, GraphNode> known_;
};

} // namespace

void write_dot(std::ostream& out, const MovementGraph& graph) {
    out << "digraph movement {\n";
    for (const auto& n : graph.nodes()) {
        out << "  " << dot_quote(n.id) << " [name=" << dot_quote(n.name) << ", support=" << n.support
            << ", mainstream=" << (n.mainstream ? "true" : "false") << "];\n";
    }
    for (const auto& a : graph.arcs()) {
        out << "  " << dot_quote(graph.node(a.src).id) << " -> " << dot_quote(graph.node(a.dst).id)
            << " [weight=" << exact(a.weight) << "];\n";
    }
    out << "}\n";
}

MovementGraph read_dot(std::istream& in) {
    std::string src{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return DotParser(std::move(src)).parse();
}

void write_graphml(std::ostream& out, const MovementGraph& graph) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
           "  <key id=\"support\" for=\"node\" attr.name=\"support\" attr.type=\"long\"/>\n"
           "  <key id=\"mainstream\" for=\"node\" attr.name=\"mainstream\" attr.type=\"boolean\"/>\n"
           "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
           "  <graph id=\"movement\" edgedefault=\"directed\">\n";
    for (const auto& n : graph.nodes()) {
        out << "    <node id=\"" << xml_escape(n.id) << "\">"
            << "<data key=\"name\">" << xml_escape(n.name) << "</data>"
            << "<data key=\"support\">" << n.support << "</data>"
            << "<data key=\"mainstream\">" << (n.mainstream ? "true" : "false") << "</data></node>\n";
    }
    for (const auto& a : graph.arcs()) {
        out << "    <edge source=\"" << xml_escape(graph.node(a.src).id) << "\" target=\""
            << xml_escape(graph.node(a.dst).id) << "\"><data key=\"weight\">" << exact(a.weight)
            << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_edge_csv(std::ostream& out, const MovementGraph& graph) {
    out << "src,dst,weight\n";
    for (const auto& a : graph.arcs())
        csv::write_record(out, {graph.node(a.src).id, graph.node(a.dst).id, csv::fixed(a.weight)});
}

} // namespace tprof
