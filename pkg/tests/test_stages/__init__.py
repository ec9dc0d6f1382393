# Test stages package
