# Test commands package
