# Pipelines package
