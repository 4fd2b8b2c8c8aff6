#pragma once
namespace bow { int selftest_stub(); }
