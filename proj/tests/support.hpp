#pragma once

#include <gtest/gtest.h>

#include "zqlab/error.hpp"

// Asserts that `stmt` throws zqlab::Error carrying `code`.
#define EXPECT_ZQ_ERROR(stmt, error_code)                                                   \
    do {                                                                                   \
        bool thrown_ = false;                                                              \
        try {                                                                              \
            (void)(stmt);                                                                  \
        } catch (const zqlab::Error& e_) {                                                 \
            thrown_ = true;                                                                \
            EXPECT_EQ(e_.code(), (error_code)) << e_.what();                               \
        }                                                                                  \
        EXPECT_TRUE(thrown_) << "expected zqlab::Error from " #stmt;                       \
    } while (0)
