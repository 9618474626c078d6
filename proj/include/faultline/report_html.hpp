#pragma once

#include <fstream>
#include <string>
#include <variant>

#include "faultline/errors.hpp"
#include "faultline/explorer.hpp"
#include "faultline/report.hpp"
#include "faultline/trace.hpp"

namespace faultline {

namespace detail {

inline std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string short_site(const CallSiteId& site) {
  return site.value.substr(0, 12);
}

inline std::string describe_fault_html(const FaultSpec& fault) {
  if (const auto* exception = std::get_if<ExceptionFault>(&fault))
    return "<pre class=\"fault\">" + html_escape(render_exception(*exception)) +
           "</pre>";
  const auto& byzantine = std::get<ByzantineFault>(fault);
  std::string text = "transformer = " + byzantine.transformer_id +
                     "\ncontext = " + std::to_string(byzantine.state.context) +
                     "\naccumulator = " +
                     display_form(byzantine.accumulator).dump(2);
  return "<pre class=\"fault\">" + html_escape(text) + "</pre>";
}

inline const char* row_class(FaultCategory category) {
  switch (category) {
    case FaultCategory::Byzantine: return " class=\"byzantine\"";
    case FaultCategory::Exception: return " class=\"exception\"";
    case FaultCategory::DeferredResolution:
      return " class=\"deferred-resolution\"";
    case FaultCategory::None: break;
  }
  return "";
}

}  // namespace detail

inline std::string render_html_report(const ExplorationResult& result) {
  using detail::html_escape;
  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Fault exploration: " + html_escape(result.test_name) +
          "</title>\n<style>\n";
  html +=
      "body { font-family: -apple-system, 'Segoe UI', Helvetica, Arial, "
      "sans-serif; margin: 24px; color: #1d1d1f; }\n"
      "h1 { font-size: 22px; } h2 { font-size: 17px; margin-top: 28px; }\n"
      "table { border-collapse: collapse; margin: 8px 0; }\n"
      "th, td { border: 1px solid #d4d4d8; padding: 4px 10px; text-align: "
      "left; vertical-align: top; font-size: 13px; }\n"
      "th { background: #f4f4f5; }\n"
      "code { background: #f4f4f5; padding: 1px 4px; border-radius: 3px; }\n"
      "tr.byzantine td { background-color: #F5A623; }\n"
      "tr.exception td { background-color: #D0021B; color: #ffffff; }\n"
      "tr.exception td code { background: transparent; color: #ffffff; }\n"
      "tr.deferred-resolution td { background-color: rgba(248,231,28,0.4); }\n"
      ".status-passed { color: #2f7d32; font-weight: 600; }\n"
      ".status-failed { color: #c62828; font-weight: 600; }\n"
      ".status-errored { color: #e65100; font-weight: 600; }\n"
      "pre.fault { margin: 0; white-space: pre-wrap; font-size: 12px; }\n"
      "details.iteration { border: 1px solid #d4d4d8; border-radius: 6px; "
      "padding: 6px 12px; margin: 10px 0; }\n"
      "details.iteration > summary { cursor: pointer; font-size: 14px; }\n"
      ".legend span { display: inline-block; padding: 2px 10px; "
      "margin-right: 10px; border-radius: 3px; font-size: 12px; }\n"
      ".warning { color: #8a6d00; }\n"
      ".banner { background-color: #fde68a; border: 1px solid #d97706; "
      "border-radius: 4px; padding: 8px 12px; font-weight: 600; }\n";
  html += "</style>\n</head>\n<body>\n";

  html += "<h1>Fault exploration report</h1>\n";
  html += "<p>Test <code>" + html_escape(result.test_name) + "</code> (block <code>" +
          html_escape(result.test_block_digest) + "</code>), generated at " +
          html_escape(current_utc_timestamp()) + ".</p>\n";

  if (result.truncated)
    html += "<p class=\"banner\">Exploration truncated: the iteration budget "
            "ran out before the fault space was fully explored. Results "
            "below are incomplete.</p>\n";

  html += "<h2>Summary</h2>\n<table>\n<tr><th>Total iterations</th>"
          "<th>Passed</th><th>Failed</th><th>Errored</th><th>Truncated</th></tr>\n";
  html += "<tr><td>" + std::to_string(result.iterations.size()) + "</td><td>" +
          std::to_string(result.count(TestStatus::Passed)) + "</td><td>" +
          std::to_string(result.count(TestStatus::Failed)) + "</td><td>" +
          std::to_string(result.count(TestStatus::Errored)) + "</td><td>" +
          (result.truncated ? "yes" : "no") + "</td></tr>\n</table>\n";

  html += "<p class=\"legend\"><span style=\"background-color: #F5A623;\">"
          "Byzantine fault</span><span style=\"background-color: #D0021B; "
          "color: #ffffff;\">Exception fault</span><span style=\""
          "background-color: rgba(248,231,28,0.4);\">Deferred resolution of a "
          "faulted call</span></p>\n";

  html += "<h2>Configuration</h2>\n<table>\n";
  for (const auto& [key, value] : result.config_snapshot.items())
    html += "<tr><th>" + html_escape(key) + "</th><td><code>" +
            html_escape(value.dump()) + "</code></td></tr>\n";
  html += "</table>\n";

  if (!result.warnings.empty()) {
    html += "<h2>Warnings</h2>\n<ul>\n";
    for (const auto& warning : result.warnings)
      html += "<li class=\"warning\">" + html_escape(warning) + "</li>\n";
    html += "</ul>\n";
  }

  html += "<h2>Iterations</h2>\n";
  for (const auto& outcome : result.iterations) {
    const bool open = outcome.status != TestStatus::Passed;
    html += std::string("<details class=\"iteration\"") +
            (open ? " open" : "") + ">\n<summary>#" +
            std::to_string(outcome.index) +
            (outcome.assignment.empty() ? " baseline" : "") +
            " &mdash; <span class=\"status-" +
            std::string(to_string(outcome.status)) + "\">" +
            std::string(to_string(outcome.status)) + "</span>" +
            (outcome.message.empty()
                 ? std::string()
                 : " &mdash; " + html_escape(outcome.message)) +
            "</summary>\n";

    if (!outcome.assignment.empty()) {
      html += "<h3>Assigned faults</h3>\n<table>\n"
              "<tr><th>Site</th><th>Method</th><th>Fault</th><th>Reached</th></tr>\n";
      for (const auto& entry : outcome.assignment.entries) {
        html += "<tr><td><code title=\"" + html_escape(entry.site.value) +
                "\">" + html_escape(detail::short_site(entry.site)) +
                "</code></td><td><code>" + html_escape(entry.method_fqn) +
                "</code></td><td>" + detail::describe_fault_html(entry.fault) +
                "</td><td>" +
                (fault_reached(entry, outcome.trace) ? "yes" : "no") +
                "</td></tr>\n";
      }
      html += "</table>\n";
    }

    html += "<h3>Trace</h3>\n<table>\n<tr><th>#</th><th>Kind</th>"
            "<th>Method</th><th>Arguments</th><th>Response</th><th>Fault</th></tr>\n";
    std::size_t row_index = 0;
    for (const auto& record : outcome.trace.records) {
      const FaultCategory category = category_of(record);
      html += "<tr" + std::string(detail::row_class(category)) + "><td>" +
              std::to_string(row_index++) + "</td><td>" +
              std::string(to_string(record.kind)) + "</td><td><code>" +
              html_escape(record.descriptor.method_fqn) + "</code></td><td>" +
              html_escape(record.descriptor.args_preview) + "</td><td>" +
              "<pre class=\"fault\">" + html_escape(record.response_preview) +
              "</pre></td><td>" +
              (record.fault ? detail::describe_fault_html(*record.fault)
                            : std::string("&mdash;")) +
              "</td></tr>\n";
    }
    html += "</table>\n</details>\n";
  }

  html += "</body>\n</html>\n";
  return html;
}

inline void write_html_report(const ExplorationResult& result,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report file '" + path + "'");
  out << render_html_report(result);
}

}  // namespace faultline
