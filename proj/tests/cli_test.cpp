#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "projheight/cli.hpp"

using namespace projheight;
using namespace projheight::cli;

namespace {

// Minimal RFC 4180 reader for round-trip checks.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            row.push_back(cell);
            cell.clear();
            rows.push_back(row);
            row.clear();
        } else {
            cell += c;
        }
    }
    return rows;
}

void expect_csv_matches_json(const OutputRecord& rec) {
    const auto csv = parse_csv(render(rec, Format::csv));
    const auto json = Json::parse(render(rec, Format::json));
    const auto& rows = json.at("rows");
    ASSERT_EQ(csv.size(), rows.size() + (rows.empty() ? 0 : 1));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& header = csv[0];
        ASSERT_EQ(header.size(), rows[r].size());
        for (std::size_t c = 0; c < header.size(); ++c) EXPECT_EQ(csv[r + 1][c], cell_text(rows[r].at(header[c])));
    }
}

int exit_of(const std::function<CommandResult()>& fn) {
    CommandResult res;
    std::string err;
    return run_command(fn, res, err);
}

} // namespace

TEST(CmdHeight, Examples) {
    auto res = cmd_height(11, {1, 2});
    ASSERT_EQ(res.record.rows.size(), 1u);
    const auto& row = res.record.rows[0];
    EXPECT_EQ(row["height"], 3);
    EXPECT_EQ(row["argmin_k"], 1);
    EXPECT_EQ(row["upper_bound"], 11);
    EXPECT_EQ(row["bound_i"], 3);
    EXPECT_EQ(row["bound_vi"], 8);

    res = cmd_height(7, {1, 2, 3});
    EXPECT_EQ(res.record.rows[0]["height"], 6);
    EXPECT_EQ(res.record.rows[0]["bound_i"], "");

    res = cmd_height(11, {4, 8});
    EXPECT_EQ(res.record.rows[0]["point"], "1;2");
}

TEST(CmdHeight, InvalidInputExitsTwo) {
    CommandResult res;
    std::string err;
    EXPECT_EQ(run_command([] { return cmd_height(4, {1, 2}); }, res, err), kInputError);
    EXPECT_NE(err.find("p is not prime"), std::string::npos);
    EXPECT_EQ(exit_of([] { return cmd_height(7, {0, 7}); }), kInputError);
    EXPECT_EQ(exit_of([] { return cmd_height(2, {1, 1}); }), kInputError);
}

TEST(CmdTable, ElevenBlock) {
    const auto res = cmd_table(11, 11);
    std::vector<std::pair<std::int64_t, std::int64_t>> got;
    for (const auto& r : res.record.rows) got.emplace_back(r["a"].get<std::int64_t>(), r["height"].get<std::int64_t>());
    EXPECT_EQ(got, (std::vector<std::pair<std::int64_t, std::int64_t>>{
                       {2, 3}, {3, 4}, {4, 4}, {5, 6}, {6, 3}, {7, 5}, {8, 5}, {9, 6}}));
}

TEST(CmdTable, TwentyNineAndDegenerate) {
    const auto res = cmd_table(29, 29);
    auto find = [&](std::int64_t a) {
        for (const auto& r : res.record.rows)
            if (r["a"] == a) return r["height"].get<std::int64_t>();
        return std::int64_t{-1};
    };
    EXPECT_EQ(find(14), 15);
    EXPECT_EQ(find(27), 15);
    EXPECT_TRUE(cmd_table(3, 3).record.rows.empty());
    EXPECT_EQ(exit_of([] { return cmd_table(13, 11); }), kInputError);
}

TEST(CmdTable, CsvSchema) {
    const auto csv = render(cmd_table(11, 11).record, Format::csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,a,height,argmin_k,method");
    EXPECT_NE(csv.find("\n11,2,3,1,formula\n"), std::string::npos);
    EXPECT_NE(csv.find("\n11,7,5,2,brute\n"), std::string::npos);
}

TEST(CmdTable, PaperRangeHasAllRows) {
    const auto res = cmd_table_paper_range();
    // sum over p of (p - 3)
    EXPECT_EQ(res.record.rows.size(), 8u + 10u + 14u + 16u + 20u + 26u);
}

TEST(CmdSpectrum, Examples) {
    auto res = cmd_spectrum(5, 2, false);
    EXPECT_EQ(res.record.summary["values"], "1;2;3;5");
    EXPECT_EQ(res.record.summary["max"], 5);
    EXPECT_EQ(res.record.summary["gaps"], "(3,5)");

    res = cmd_spectrum(7, 3, true);
    EXPECT_EQ(res.exit_code, kSuccess);
    EXPECT_EQ(res.record.summary["lower_bound"], 8);
    EXPECT_EQ(res.record.summary["upper_bound"], 10);
    EXPECT_EQ(res.record.summary["bounds_pass"], true);

    EXPECT_EQ(exit_of([] { return cmd_spectrum(101, 4, false, 1000); }), kBudgetExceeded);
}

TEST(CmdGaps, HalfMarginWindowsAreEmptyUpTo97) {
    const auto res = cmd_gaps(3, 97, 1, Rational(1, 2));
    EXPECT_EQ(res.record.summary["all_empty"], true);
    EXPECT_EQ(res.record.summary["primes"], 24);
}

TEST(CmdGaps, ZeroMarginReportsTheMidpoint) {
    const auto res = cmd_gaps(3, 97, 1, Rational(0));
    for (const auto& row : res.record.rows) {
        const auto p = row["p"].get<std::int64_t>();
        EXPECT_EQ(row["hits"], std::to_string((p + 1) / 2)) << p;
    }
}

TEST(CmdCayley, Examples) {
    auto res = cmd_cayley(7, {1, 2}, CayleyFlags{true, true, false});
    EXPECT_EQ(res.exit_code, kSuccess);
    const auto& row = res.record.rows[0];
    EXPECT_EQ(row["gamma"], 7);
    EXPECT_EQ(row["beta_upper"], 3);
    EXPECT_EQ(row["beta_exact"], 3);
    EXPECT_EQ(res.record.summary["status"], "pass");

    res = cmd_cayley(11, {1, 9}, CayleyFlags{false, true, false});
    EXPECT_EQ(res.record.rows[0]["triangle_free"], false);
    EXPECT_EQ(res.exit_code, kSuccess);

    EXPECT_EQ(exit_of([] { return cmd_cayley(29, {1, 2}, CayleyFlags{true, false, false}); }), kBudgetExceeded);
    EXPECT_EQ(exit_of([] { return cmd_cayley(23, {1, 2}, CayleyFlags{true, false, false, 23}); }), kSuccess);
    EXPECT_EQ(exit_of([] { return cmd_cayley(29, {1, 2}, CayleyFlags{true, false, false, 29}); }), kBudgetExceeded);
    EXPECT_EQ(exit_of([] { return cmd_cayley(7, {1, 0}, CayleyFlags{}); }), kInputError);
    EXPECT_EQ(exit_of([] { return cmd_cayley(9, {1, 2}, CayleyFlags{}); }), kInputError);
}

TEST(CmdScan, Examples) {
    auto res = cmd_scan(23, 2, ScanFlags{true});
    EXPECT_EQ(res.exit_code, kSuccess);
    EXPECT_EQ(res.record.summary["violations"], 0);
    res = cmd_scan(13, 3, ScanFlags{});
    EXPECT_EQ(res.record.summary["final_chain_checked"], 0);
    res = cmd_scan(2, 2, ScanFlags{});
    EXPECT_EQ(res.record.summary["empty"], true);
    EXPECT_TRUE(res.record.rows.empty());
}

TEST(CmdKFree, Examples) {
    auto res = cmd_kfree(11, 2, 3);
    EXPECT_EQ(res.record.summary["max_height"], 5);
    res = cmd_kfree(5, 2, 3);
    EXPECT_EQ(res.record.summary["max_height"], "none");
}

TEST(Rendering, Deterministic) {
    for (auto f : {Format::text, Format::csv, Format::json}) {
        EXPECT_EQ(render(cmd_scan(13, 2, ScanFlags{true}).record, f), render(cmd_scan(13, 2, ScanFlags{true}).record, f));
        EXPECT_EQ(render(cmd_table_paper_range().record, f), render(cmd_table_paper_range().record, f));
    }
}

TEST(Rendering, CsvRoundTripsThroughJson) {
    expect_csv_matches_json(cmd_table(11, 13).record);
    expect_csv_matches_json(cmd_scan(17, 2, ScanFlags{true}).record);
    expect_csv_matches_json(cmd_gaps(3, 31, 2, Rational(1, 3)).record);
    expect_csv_matches_json(cmd_spectrum(7, 3, true).record);
    expect_csv_matches_json(cmd_height(13, {2, 3}).record);

    OutputRecord tricky;
    Json row = Json::object();
    row["text"] = "a,\"b\"";
    row["n"] = -4;
    tricky.rows.push_back(row);
    expect_csv_matches_json(tricky);
}

TEST(Rendering, JsonShape) {
    const auto j = Json::parse(render(cmd_height(11, {1, 2}).record, Format::json));
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["command"], "height");
    EXPECT_TRUE(j["parameters"].is_object());
    EXPECT_TRUE(j["rows"].is_array());
    EXPECT_TRUE(j["summary"].is_object());
    EXPECT_THROW(parse_format("xml"), InputError);
}

TEST(ParseRational, Forms) {
    EXPECT_EQ(parse_rational("0"), Rational(0));
    EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
    EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
    EXPECT_THROW(parse_rational("1/0"), InputError);
    EXPECT_THROW(parse_rational("x"), InputError);
    EXPECT_THROW(parse_rational("1.5"), InputError);
    EXPECT_EQ(rational_text(Rational(7, 2)), "7/2");
    EXPECT_EQ(rational_text(Rational(-3)), "-3");
}

TEST(ExactCapFromEnv, ReadsOverride) {
    ::unsetenv("PROJHEIGHT_EXACT_CAP");
    EXPECT_EQ(exact_cap_from_env(), kDefaultExactCap);
    ::setenv("PROJHEIGHT_EXACT_CAP", "19", 1);
    EXPECT_EQ(exact_cap_from_env(), 19u);
    ::setenv("PROJHEIGHT_EXACT_CAP", "abc", 1);
    EXPECT_THROW(exact_cap_from_env(), InputError);
    ::unsetenv("PROJHEIGHT_EXACT_CAP");
}
