import { ClarifyClient } from './api';
import { createApp } from './render';

const params = new URLSearchParams(window.location.search);
const base = params.get('service') ?? 'http://127.0.0.1:8787';

createApp(document.getElementById('app')!, new ClarifyClient(base));
