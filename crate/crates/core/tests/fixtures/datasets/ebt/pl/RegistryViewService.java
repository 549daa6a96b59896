public class RegistryViewService {
    public void assignView(View view) {
        viewStore.assign(view);
    }
    public void notifyRegistry(Registry registry) {
        registryStore.notify(registry);
    }
    public void searchRegistry(Registry registry) {
        registryStore.search(registry);
    }
}
