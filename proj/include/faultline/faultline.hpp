#pragma once

// Umbrella header: the whole library in one include.

#include "faultline/accumulator.hpp"
#include "faultline/call_site.hpp"
#include "faultline/catalog.hpp"
#include "faultline/check.hpp"
#include "faultline/deferred.hpp"
#include "faultline/digest.hpp"
#include "faultline/errors.hpp"
#include "faultline/explorer.hpp"
#include "faultline/fault.hpp"
#include "faultline/interceptor.hpp"
#include "faultline/interface_registry.hpp"
#include "faultline/report.hpp"
#include "faultline/report_html.hpp"
#include "faultline/report_json.hpp"
#include "faultline/session.hpp"
#include "faultline/trace.hpp"
#include "faultline/transform.hpp"
#include "faultline/value.hpp"
