public class ViewNotificationHandler {
    public void submitNotification(Notification notification) {
        notificationStore.submit(notification);
    }
    public void findNotification(Notification notification) {
        notificationStore.find(notification);
    }
    public void editNotification(Notification notification) {
        notificationStore.edit(notification);
    }
    public void assignNotification(Notification notification) {
        notificationStore.assign(notification);
    }
}
