#!/usr/bin/env node
import { runCli } from "./main.js";

process.exit(runCli(process.argv.slice(2)));
