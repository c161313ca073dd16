#include "mediaprof/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mediaprof/error.hpp"
#include "mediaprof/url.hpp"

namespace mediaprof {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// RFC-4180-style split of one line; quotes may wrap fields and "" escapes a quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(field).empty())
                return std::nullopt;
            field.clear();
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            if (was_quoted && c != ' ' && c != '\r')
                return std::nullopt;
            field.push_back(c);
        }
    }
    if (quoted)
        return std::nullopt;
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return fields;
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out += '"';
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what)
{
    throw ValidationError(where + ": " + what);
}

const json* member(const json& obj, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return nullptr;
    return &*it;
}

std::string get_string(const json& obj, const char* key, const std::string& path, bool required)
{
    const json* v = member(obj, key);
    if (!v) {
        if (required)
            schema_error(path + "." + key, "missing required string");
        return {};
    }
    if (!v->is_string())
        schema_error(path + "." + key, "expected string");
    return v->get<std::string>();
}

std::vector<std::string> get_string_list(const json& obj, const char* key, const std::string& path)
{
    std::vector<std::string> out;
    const json* v = member(obj, key);
    if (!v)
        return out;
    if (!v->is_array())
        schema_error(path + "." + key, "expected array of strings");
    for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string())
            schema_error(path + "." + key + "[" + std::to_string(i) + "]", "expected string");
        out.push_back((*v)[i].get<std::string>());
    }
    return out;
}

std::int64_t get_count(const json& obj, const char* key, const std::string& path)
{
    const json* v = member(obj, key);
    if (!v)
        return 0;
    if (!v->is_number_integer())
        schema_error(path + "." + key, "expected integer");
    auto n = v->get<std::int64_t>();
    if (n < 0)
        schema_error(path + "." + key, "count must be non-negative");
    return n;
}

Date parse_date(const std::string& s, const std::string& path)
{
    Date d;
    char tail = 0;
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &d.year, &d.month, &d.day, &tail) != 3
        || s[4] != '-' || s[7] != '-' || d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        schema_error(path, "expected date YYYY-MM-DD, got '" + s + "'");
    return d;
}

std::string format_date(const Date& d)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

} // namespace

std::string normalize_medium_id(std::string_view url_or_domain)
{
    auto parsed = parse_url(url_or_domain);
    if (!parsed)
        throw ValidationError("cannot derive a medium id from '" + std::string(url_or_domain) + "'");
    return host_key(*parsed);
}

Factuality parse_factuality(std::string_view label)
{
    auto s = trim(label);
    if (s == "Very High")
        return Factuality::High;
    for (std::size_t i = 0; i < kFactualityNames.size(); ++i)
        if (s == kFactualityNames[i])
            return static_cast<Factuality>(i);
    throw ValidationError("unknown factuality label '" + std::string(s) + "'");
}

Bias7 parse_bias7(std::string_view label)
{
    auto s = trim(label);
    for (std::size_t i = 0; i < kBias7Names.size(); ++i)
        if (s == kBias7Names[i])
            return static_cast<Bias7>(i);
    throw ValidationError("unknown bias label '" + std::string(s) + "'");
}

int map_bias_7_to_3(int bias7)
{
    require(bias7 >= 0 && bias7 <= 6, "bias7 ordinal out of range: " + std::to_string(bias7));
    if (bias7 <= 1)
        return 0;
    if (bias7 <= 4)
        return 1;
    return 2;
}

std::vector<MediumRecord> parse_corpus(std::string_view text)
{
    std::vector<MediumRecord> records;
    std::unordered_set<std::string> seen;
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (trim(line).empty())
            continue;

        auto fields = split_csv_line(line);
        if (!fields)
            throw ParseError("corpus line " + std::to_string(line_no) + ": unbalanced quotes");
        if (!header_seen) {
            if (*fields != std::vector<std::string>{"medium_id", "url", "factuality", "bias7"})
                throw ParseError("corpus line " + std::to_string(line_no)
                                 + ": expected header medium_id,url,factuality,bias7");
            header_seen = true;
            continue;
        }
        if (fields->size() != 4)
            throw ParseError("corpus line " + std::to_string(line_no) + ": expected 4 fields, got "
                             + std::to_string(fields->size()));

        MediumRecord rec;
        try {
            rec.medium_id = normalize_medium_id((*fields)[0]);
            rec.url = (*fields)[1];
            rec.factuality = parse_factuality((*fields)[2]);
            rec.bias7 = parse_bias7((*fields)[3]);
        } catch (const ValidationError& e) {
            throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(rec.medium_id).second)
            throw ValidationError("corpus line " + std::to_string(line_no) + ": duplicate medium_id '"
                                  + rec.medium_id + "'");
        records.push_back(std::move(rec));
    }
    if (!header_seen)
        throw ParseError("corpus is empty: missing header");
    return records;
}

std::vector<MediumRecord> load_corpus(const std::filesystem::path& path)
{
    return parse_corpus(read_file(path));
}

void write_corpus(const std::filesystem::path& path, const std::vector<MediumRecord>& records)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw NotFoundError("cannot write " + path.string());
    out << "medium_id,url,factuality,bias7\n";
    for (const auto& r : records)
        out << csv_field(r.medium_id) << ',' << csv_field(r.url) << ','
            << kFactualityNames[static_cast<int>(r.factuality)] << ','
            << kBias7Names[static_cast<int>(r.bias7)] << '\n';
}

EvidenceBundle bundle_from_json(const json& doc)
{
    if (!doc.is_object())
        schema_error("$", "expected object");
    EvidenceBundle b;
    b.medium_id = get_string(doc, "medium_id", "$", true);

    if (const json* arts = member(doc, "articles")) {
        if (!arts->is_array())
            schema_error("$.articles", "expected array");
        for (std::size_t i = 0; i < arts->size(); ++i) {
            const auto& a = (*arts)[i];
            std::string path = "$.articles[" + std::to_string(i) + "]";
            if (!a.is_object())
                schema_error(path, "expected object");
            ArticleDoc doc_out;
            doc_out.title = get_string(a, "title", path, false);
            doc_out.body = get_string(a, "body", path, false);
            if (member(a, "published_at"))
                doc_out.published_at = parse_date(get_string(a, "published_at", path, true), path + ".published_at");
            b.articles.push_back(std::move(doc_out));
        }
    }

    if (const json* w = member(doc, "wiki")) {
        if (!w->is_object())
            schema_error("$.wiki", "expected object");
        b.wiki.exists = true;
        b.wiki.content = get_string(*w, "content", "$.wiki", false);
        b.wiki.summary = get_string(*w, "summary", "$.wiki", false);
        b.wiki.infobox = get_string(*w, "infobox", "$.wiki", false);
        b.wiki.categories = get_string_list(*w, "categories", "$.wiki");
        b.wiki.toc = get_string_list(*w, "toc", "$.wiki");
    }

    if (const json* t = member(doc, "twitter")) {
        if (!t->is_object())
            schema_error("$.twitter", "expected object");
        auto& tw = b.twitter;
        tw.exists = true;
        if (const json* v = member(*t, "verified")) {
            if (!v->is_boolean())
                schema_error("$.twitter.verified", "expected bool");
            tw.verified = v->get<bool>();
        }
        if (const json* v = member(*t, "created_year")) {
            if (!v->is_number_integer())
                schema_error("$.twitter.created_year", "expected integer");
            tw.created_year = v->get<int>();
        }
        if (member(*t, "location"))
            tw.location = get_string(*t, "location", "$.twitter", true);
        if (member(*t, "profile_url"))
            tw.profile_url = get_string(*t, "profile_url", "$.twitter", true);
        tw.description = get_string(*t, "description", "$.twitter", false);
        if (const json* c = member(*t, "counts")) {
            if (!c->is_object())
                schema_error("$.twitter.counts", "expected object");
            const std::string cp = "$.twitter.counts";
            tw.counts.followers = get_count(*c, "followers", cp);
            tw.counts.friends = get_count(*c, "friends", cp);
            tw.counts.statuses = get_count(*c, "statuses", cp);
            tw.counts.favorites = get_count(*c, "favorites", cp);
            tw.counts.listed = get_count(*c, "listed", cp);
        }
    }

    if (const json* r = member(doc, "alexa_rank")) {
        if (!r->is_number_integer())
            schema_error("$.alexa_rank", "expected integer");
        auto rank = r->get<std::int64_t>();
        if (rank < 1)
            schema_error("$.alexa_rank", "rank must be >= 1, got " + std::to_string(rank));
        b.alexa_rank = rank;
    }
    return b;
}

json bundle_to_json(const EvidenceBundle& b)
{
    json doc;
    doc["medium_id"] = b.medium_id;
    json arts = json::array();
    for (const auto& a : b.articles) {
        json ja{{"title", a.title}, {"body", a.body}};
        if (a.published_at)
            ja["published_at"] = format_date(*a.published_at);
        arts.push_back(std::move(ja));
    }
    doc["articles"] = std::move(arts);
    if (b.wiki.exists)
        doc["wiki"] = {{"content", b.wiki.content},
                       {"summary", b.wiki.summary},
                       {"infobox", b.wiki.infobox},
                       {"categories", b.wiki.categories},
                       {"toc", b.wiki.toc}};
    if (b.twitter.exists) {
        const auto& t = b.twitter;
        json jt{{"verified", t.verified},
                {"description", t.description},
                {"counts",
                 {{"followers", t.counts.followers},
                  {"friends", t.counts.friends},
                  {"statuses", t.counts.statuses},
                  {"favorites", t.counts.favorites},
                  {"listed", t.counts.listed}}}};
        if (t.created_year)
            jt["created_year"] = *t.created_year;
        if (t.location)
            jt["location"] = *t.location;
        if (t.profile_url)
            jt["profile_url"] = *t.profile_url;
        doc["twitter"] = std::move(jt);
    }
    if (b.alexa_rank)
        doc["alexa_rank"] = *b.alexa_rank;
    return doc;
}

EvidenceBundle load_bundle(const std::filesystem::path& root, std::string_view medium_id)
{
    auto path = root / std::string(medium_id) / "bundle.json";
    if (!std::filesystem::exists(path))
        throw NotFoundError("bundle not found: " + path.string());
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    EvidenceBundle b;
    try {
        b = bundle_from_json(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    if (b.medium_id != medium_id)
        throw ValidationError(path.string() + ": $.medium_id: expected '" + std::string(medium_id) + "', got '"
                              + b.medium_id + "'");
    return b;
}

void save_bundle(const std::filesystem::path& root, const EvidenceBundle& bundle)
{
    auto dir = root / bundle.medium_id;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "bundle.json", std::ios::binary);
    if (!out)
        throw NotFoundError("cannot write bundle under " + dir.string());
    out << bundle_to_json(bundle).dump(1) << '\n';
}

} // namespace mediaprof
