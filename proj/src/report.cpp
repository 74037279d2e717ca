#include "xllsim/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace xllsim {

std::string format_ratio(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

std::string report_to_json(const ScenarioReport& report) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["policy"] = std::string(policy_name(report.policy));
    j["programs"] = nlohmann::ordered_json::array();
    for (const ProgramResult& p : report.programs) {
        j["programs"].push_back({{"program", p.program},
                                 {"name", p.name},
                                 {"submit_tick", p.submit_tick},
                                 {"spawn_tick", p.spawn_tick},
                                 {"completion_tick", p.completion_tick},
                                 {"turnaround_jiffies", p.turnaround}});
    }
    j["mean_turnaround"] = format_ratio(report.mean_turnaround);
    j["max_turnaround"] = report.max_turnaround;
    j["throughput_per_jiffy"] = format_ratio(report.throughput);
    j["core_load"] = nlohmann::ordered_json::array();
    for (const CoreLoad& c : report.core_load) {
        j["core_load"].push_back(
            {{"core", c.core_id}, {"user", c.user}, {"idle", c.idle}});
    }
    j["samples"] = nlohmann::ordered_json::array();
    for (const LoadSample& s : report.samples) {
        j["samples"].push_back({{"tick", s.tick}, {"user", s.user}});
    }
    return j.dump(2) + "\n";
}

std::string report_programs_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "program,name,submit_tick,spawn_tick,completion_tick,"
           "turnaround_jiffies\n";
    for (const ProgramResult& p : report.programs) {
        out << p.program << ',' << p.name << ',' << p.submit_tick << ','
            << p.spawn_tick << ',' << p.completion_tick << ',' << p.turnaround
            << '\n';
    }
    return out.str();
}

std::string report_samples_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "tick,core,user_jiffies\n";
    for (const LoadSample& s : report.samples) {
        for (std::size_t i = 0; i < s.user.size(); ++i) {
            out << s.tick << ',' << report.core_load[i].core_id << ','
                << s.user[i] << '\n';
        }
    }
    return out.str();
}

std::string comparison_csv(const std::vector<ScenarioReport>& reports) {
    std::ostringstream out;
    out << "program,name";
    for (const ScenarioReport& r : reports) {
        out << ",turnaround_" << policy_name(r.policy);
    }
    out << '\n';
    if (reports.empty()) return out.str();
    std::size_t count = reports.front().programs.size();
    for (std::size_t i = 0; i < count; ++i) {
        out << reports.front().programs[i].program << ','
            << reports.front().programs[i].name;
        for (const ScenarioReport& r : reports) {
            out << ',' << r.programs[i].turnaround;
        }
        out << '\n';
    }
    out << "mean,";
    for (const ScenarioReport& r : reports) {
        out << ',' << format_ratio(r.mean_turnaround);
    }
    out << "\nmax,";
    for (const ScenarioReport& r : reports) {
        out << ',' << r.max_turnaround;
    }
    out << "\nthroughput_per_jiffy,";
    for (const ScenarioReport& r : reports) {
        out << ',' << format_ratio(r.throughput);
    }
    out << '\n';
    return out.str();
}

std::string comparison_table(const std::vector<ScenarioReport>& reports) {
    std::ostringstream out;
    if (reports.empty()) return "";
    out << "turnaround (jiffies) by policy, scenario "
        << reports.front().scenario << "\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s %-16s", "id", "program");
    out << line;
    for (const ScenarioReport& r : reports) {
        std::snprintf(line, sizeof(line), " %12s",
                      std::string(policy_name(r.policy)).c_str());
        out << line;
    }
    out << '\n';
    std::size_t count = reports.front().programs.size();
    for (std::size_t i = 0; i < count; ++i) {
        std::snprintf(line, sizeof(line), "%-4d %-16s",
                      reports.front().programs[i].program,
                      reports.front().programs[i].name.c_str());
        out << line;
        for (const ScenarioReport& r : reports) {
            std::snprintf(line, sizeof(line), " %12llu",
                          static_cast<unsigned long long>(
                              r.programs[i].turnaround));
            out << line;
        }
        out << '\n';
    }
    std::snprintf(line, sizeof(line), "%-4s %-16s", "", "mean");
    out << line;
    for (const ScenarioReport& r : reports) {
        std::snprintf(line, sizeof(line), " %12s",
                      format_ratio(r.mean_turnaround).c_str());
        out << line;
    }
    out << '\n';
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "threads,policy,turnaround_jiffies,speedup\n";
    for (const SweepRow& row : rows) {
        out << row.threads << ',' << policy_name(row.policy) << ','
            << row.turnaround << ',' << format_ratio(row.speedup) << '\n';
    }
    return out.str();
}

}  // namespace xllsim
